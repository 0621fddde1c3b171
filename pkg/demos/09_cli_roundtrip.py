"""Drive the command line interface from a config file.

Every scenario the library exposes can also be run from a small
key=value config through the `photonforge` entry point, which writes a
gnuplot-friendly CSV plus a meta file recording the exact parameter set.
This script writes a config into a temporary directory, invokes the CLI
in process, and prints what lands on disk.
"""

import pathlib
import tempfile

from photonforge import cli


def main():
    with tempfile.TemporaryDirectory() as tmp:
        outdir = pathlib.Path(tmp) / "out"
        config = pathlib.Path(tmp) / "run.cfg"
        config.write_text(
            "# residual drive tone for a static phase error\n"
            "scenario = cancel_budget\n"
            f"outdir = {outdir}\n"
            "phi2 = 3.181592653589793   # pi + 0.04\n"
        )
        print("config:")
        print(config.read_text())

        rc = cli.main(["run", str(config)])
        print(f"exit code: {rc}")
        print()
        print("result.csv:")
        print((outdir / "result.csv").read_text())
        print("meta:")
        print((outdir / "meta").read_text())


if __name__ == "__main__":
    main()
