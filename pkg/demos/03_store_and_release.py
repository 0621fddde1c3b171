"""Store an excitation in the dark state, then release it on demand.

The round-trip phase starts at 0.9 pi, where the residual coupling is
weak enough for a clean pi pulse.  Right after the pulse the phase jumps
to pi: the emitter decouples and the excitation is frozen.  At the
release time the phase jumps again to pi/2 and the photon leaves through
the line.  The flux timeline below shows the three regimes, and the
counting statistics confirm a near-deterministic single photon.
"""

import numpy as np

import photonforge as pf


def main():
    params = pf.MirrorQubitParams(gamma=1.0)
    res = pf.run_shaped_release(params, alpha0=10.0)

    print("storage-and-release run, alpha0 = 10, release at t = 8")
    print(f"excited population at release: {res.p_exc_at_release:.6f}")
    p = res.stats.probabilities
    print(f"P0 = {p[0]:.6f}   P1 = {p[1]:.6f}")
    print(f"emitted fraction in the counting window: "
          f"{res.emitted_fraction:.6f}")
    print()

    print("flux timeline (phase column is the programmed round-trip phase)")
    print(f"{'t':>6} {'phase/pi':>9} {'flux':>12}")
    for t_probe in (0.5, 1.3, 3.0, 6.0, 8.2, 9.0, 10.0, 12.0):
        i = int(np.argmin(np.abs(res.times - t_probe)))
        print(f"{res.times[i]:6.2f} {res.phase[i] / np.pi:9.3f} "
              f"{res.flux[i]:12.3e}")
    print()
    print("during storage (phase = pi) the flux is identically zero;")
    print("everything the counter sees arrives after the release jump.")


if __name__ == "__main__":
    main()
