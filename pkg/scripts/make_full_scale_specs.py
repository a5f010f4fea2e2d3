"""Regenerate the full-scale benchmark spec files under benchmarks/full/.

One file per (function, n, rsnr) cell of the original 100-replicate study:
200k iterations, 100k burn-in, thin 10, per-function prior settings from
levyspline.reference.STUDY_HYPERPARAMS. These are shipped pre-generated;
run this script only if the settings table changes.
"""

import pathlib

from levyspline.reference import STUDY_HYPERPARAMS

OUT = pathlib.Path(__file__).parent / "benchmarks" / "full"

TEMPLATE = """\
# Full-scale benchmark: {function}, n = {n}, RSNR = {rsnr:g}.
# 100 replicates at 200k iterations; expect hours of runtime.
function = {function}
n = {n}
rsnr = {rsnr:g}
replicates = 100
degrees = {degrees}
r = {r:g}
R = {R:g}
a_gamma = {a_gamma:g}
b_gamma = {b_gamma:g}
iterations = 200000
burn_in = 100000
thin = 10
seed = 0
"""


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for function, settings in sorted(STUDY_HYPERPARAMS.items()):
        for n in (128, 512):
            for rsnr in (3.0, 5.0, 10.0):
                text = TEMPLATE.format(
                    function=function, n=n, rsnr=rsnr,
                    degrees=",".join(str(k) for k in settings["degrees"]),
                    r=settings["r"], R=settings["R"],
                    a_gamma=settings["a_gamma"], b_gamma=settings["b_gamma"])
                path = OUT / f"{function}_n{n}_rsnr{rsnr:g}.txt"
                path.write_text(text)
                print(f"wrote {path}")


if __name__ == "__main__":
    main()
