"""Budget the source efficiency against loss and storage time.

Two imperfections bound a practical on-demand source.  First, any
nonradiative decay channel competes with emission into the line; when
its rate matches the radiative one, the single-photon probability drops
to roughly one half.  Second, during dark storage the excitation still
leaks through whatever nonradiative channel exists, so longer waits
before release cost efficiency exponentially.
"""

import math

import photonforge as pf


def main():
    print("single-photon probability versus nonradiative rate")
    print("(pi-pulse source, alpha0 = 10, r = 0.995, radiative rate 1)")
    print(f"{'loss rate':>10} {'P0':>10} {'P1':>10}")
    out = pf.sweep_nonradiative(pf.MirrorQubitParams(gamma=0.5), 10.0, 0.995,
                                (0.0, 0.1, 0.2, 0.5, 1.0))
    for gnr, stats in out:
        print(f"{gnr:10.2f} {stats.prob(0):10.6f} {stats.prob(1):10.6f}")
    print()

    print("stored-photon release after a variable wait, loss rate 0.1")
    print(f"{'wait':>6} {'p_exc':>10} {'P1':>10}")
    res = pf.sweep_wait_time(pf.MirrorQubitParams(gamma=1.0), 10.0, 0.1,
                             math.pi / 2.0, (0.0, 1.0, 2.0, 3.0, 5.0))
    for t_wait, r in res:
        print(f"{t_wait:6.1f} {r.p_exc_at_release:10.6f} "
              f"{r.stats.prob(1):10.6f}")


if __name__ == "__main__":
    main()
