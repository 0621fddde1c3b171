"""Error budget for cancelling the drive tone at the counter.

The tap splitter transmits a small fraction of the drive; a second tone
with matched amplitude and opposite phase removes it.  This calculator
reports the residual fraction of the original tone for given amplitude,
phase, transmission, and frequency mismatches.  A perfectly matched pair
cancels to numerical noise; a static phase error theta leaves a
residual 2 sin(theta/2); detuned paths stop cancelling entirely and beat.
"""

import math

import photonforge as pf


def main():
    print("residual drive tone after imperfect cancellation")
    print(f"{'phase error (rad)':>18} {'ratio':>12} {'dB':>10}")
    for err in (0.2, 0.1, 0.04, 0.01):
        out = pf.cancellation_budget(
            pf.CancellationInputs(a1=1.0, a2=1.0, phi2=math.pi + err))
        print(f"{err:18.3f} {out.residual_ratio:12.3e} "
              f"{out.residual_db:10.2f}")
    print()

    matched = pf.cancellation_budget(pf.CancellationInputs.matched())
    print(f"matched pair: ratio = {matched.residual_ratio:.2e}, "
          f"{matched.residual_db:.0f} dB (numerical noise floor)")

    detuned = pf.cancellation_budget(
        pf.CancellationInputs(a1=1.0, a2=1.0, omega2=0.3))
    print(f"detuned paths: ratio = {detuned.residual_ratio:.2f}, "
          f"beat = {detuned.beat} (no static cancellation possible)")


if __name__ == "__main__":
    main()
