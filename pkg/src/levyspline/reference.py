"""Reference MSE values from the originating 100-replicate simulation study.

Each entry is the reported mean MSE and its estimated standard error for
this model, run at 200k iterations (100k burn-in, thin 10). Keyed by
(function name, n, rsnr). These are comparison constants only; nothing in
the sampler depends on them.
"""

from __future__ import annotations

# (function, n, rsnr) -> (mean MSE, standard error)
REFERENCE_MSE: dict[tuple[str, int, float], tuple[float, float]] = {
    # first simulation, n = 128
    ("bumps", 128, 3.0): (2.589, 0.5908),
    ("bumps", 128, 5.0): (0.837, 0.3124),
    ("bumps", 128, 10.0): (0.246, 0.0683),
    ("blocks", 128, 3.0): (1.305, 0.5272),
    ("blocks", 128, 5.0): (0.365, 0.1645),
    ("blocks", 128, 10.0): (0.072, 0.0293),
    ("doppler", 128, 3.0): (2.273, 0.568),
    ("doppler", 128, 5.0): (0.848, 0.2521),
    ("doppler", 128, 10.0): (0.234, 0.0551),
    ("heavisine", 128, 3.0): (0.897, 0.242),
    ("heavisine", 128, 5.0): (0.413, 0.1492),
    ("heavisine", 128, 10.0): (0.103, 0.0406),
    # first simulation, n = 512
    ("bumps", 512, 3.0): (1.371, 0.6845),
    ("bumps", 512, 5.0): (0.619, 0.1769),
    ("bumps", 512, 10.0): (0.341, 0.1905),
    ("blocks", 512, 3.0): (0.363, 0.1391),
    ("blocks", 512, 5.0): (0.113, 0.0562),
    ("blocks", 512, 10.0): (0.021, 0.009),
    ("doppler", 512, 3.0): (1.243, 0.2135),
    ("doppler", 512, 5.0): (0.66, 0.1141),
    ("doppler", 512, 10.0): (0.343, 0.0843),
    ("heavisine", 512, 3.0): (0.291, 0.1185),
    ("heavisine", 512, 5.0): (0.103, 0.0508),
    ("heavisine", 512, 10.0): (0.031, 0.0128),
    # second simulation, n = 128
    ("modified_blocks", 128, 3.0): (1.868, 0.5982),
    ("modified_blocks", 128, 5.0): (0.691, 0.2022),
    ("modified_blocks", 128, 10.0): (0.162, 0.044),
    ("modified_bumps", 128, 3.0): (2.01, 0.6006),
    ("modified_bumps", 128, 5.0): (0.803, 0.1491),
    ("modified_bumps", 128, 10.0): (0.248, 0.0457),
    ("modified_heavisine", 128, 3.0): (1.589, 0.5081),
    ("modified_heavisine", 128, 5.0): (0.635, 0.1727),
    ("modified_heavisine", 128, 10.0): (0.172, 0.0472),
    # second simulation, n = 512
    ("modified_blocks", 512, 3.0): (0.583, 0.1718),
    ("modified_blocks", 512, 5.0): (0.234, 0.0696),
    ("modified_blocks", 512, 10.0): (0.071, 0.0325),
    ("modified_bumps", 512, 3.0): (0.919, 0.1397),
    ("modified_bumps", 512, 5.0): (0.46, 0.0867),
    ("modified_bumps", 512, 10.0): (0.194, 0.0443),
    ("modified_heavisine", 512, 3.0): (0.576, 0.146),
    ("modified_heavisine", 512, 5.0): (0.236, 0.0575),
    ("modified_heavisine", 512, 10.0): (0.078, 0.024),
}

# Published per-function prior settings (degrees S, r, R, a_gamma, b_gamma).
STUDY_HYPERPARAMS: dict[str, dict] = {
    "bumps": {"degrees": (1,), "r": 100.0, "R": 0.01, "a_gamma": 1.0, "b_gamma": 1.0},
    "blocks": {"degrees": (0,), "r": 0.01, "R": 0.01, "a_gamma": 1.0, "b_gamma": 1.0},
    "doppler": {"degrees": (1, 2), "r": 100.0, "R": 0.01, "a_gamma": 1.0, "b_gamma": 1.0},
    "heavisine": {"degrees": (0, 2), "r": 0.01, "R": 0.01, "a_gamma": 1.0, "b_gamma": 1.0},
    "modified_blocks": {"degrees": (0, 2, 3), "r": 0.01, "R": 0.01,
                        "a_gamma": 1.0, "b_gamma": 1.0},
    "modified_bumps": {"degrees": (1, 2), "r": 50.0, "R": 0.01,
                       "a_gamma": 1.0, "b_gamma": 1.0},
    "modified_heavisine": {"degrees": (0, 1, 2, 3), "r": 0.01, "R": 0.01,
                           "a_gamma": 5.0, "b_gamma": 1.0},
}


def reference_mse(function: str, n: int, rsnr: float):
    """Return (mean, se) if registered, else None."""
    return REFERENCE_MSE.get((function, int(n), float(rsnr)))
