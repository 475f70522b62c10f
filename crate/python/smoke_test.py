"""Builds the extension module, imports it and checks a few values."""

import math
import os
import shutil
import subprocess
import sys
import tempfile

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def build():
    subprocess.run(
        ["cargo", "build", "--release", "-p", "cavity-sense-py", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    lib = os.path.join(ROOT, "target", "release", "libcavity_sense_py.so")
    dest = tempfile.mkdtemp(prefix="cavity_sense_py_")
    shutil.copy(lib, os.path.join(dest, "cavity_sense_py.so"))
    sys.path.insert(0, dest)


def close(a, b, rel):
    return abs(a - b) <= rel * abs(b)


def main():
    if "--no-build" not in sys.argv:
        build()
    import cavity_sense_py as cs

    n, alpha, t = 10, 4.0, 0.3
    want = 4 + 8 * alpha**2 * (1 - math.cos(t) ** n)
    assert close(cs.ideal_qfi(n, alpha, t), want, 1e-12), cs.ideal_qfi(n, alpha, t)

    # the Gaussian form reduces to the short-time ideal QFI without loss
    assert close(cs.loss_qfi(n, alpha, 0.0, t), 4 + 4 * n * alpha**2 * t**2, 1e-12)
    assert close(cs.loss_qfi(n, alpha, 0.0, t, method="eigen"), want, 1e-9)
    assert close(cs.loss_qfi(6, 2.0, 0.05, 0.2, method="eigen"), cs.loss_qfi(6, 2.0, 0.05, 0.2), 0.05)

    # short times: (δβ)² ≈ 1 / (4 N α² τ²)
    tau = 1e-3
    d = cs.ideal_sensitivity(100, 10.0, tau)
    assert close(d, 1 / (4 * 100 * 10.0**2 * tau**2), 1e-3), d

    assert close(cs.metrological_gain(0.25), 0.0, 1e-12)
    assert close(cs.metrological_gain(0.025), 10.0, 1e-12)

    t_opt, best = cs.kappa_optimum(10**6, 1e4, 1e3)
    at_opt = cs.kappa_sensitivity(10**6, 1e4, 1e3, t_opt)
    assert t_opt > 0 and best < 0.25 and close(at_opt, best, 0.1), (t_opt, best, at_opt)

    g = 2 * math.pi * 11e3
    assert cs.gamma_sensitivity(10**6, 1e4, g, 2 * math.pi * 7.5e3, 50e-9, math.pi / 2) < 0.25
    assert cs.detection_noise_sensitivity(100, 10.0, 0.05, math.pi / 2, 2.5) > cs.detection_noise_sensitivity(100, 10.0, 0.05, math.pi / 2, 0.0)

    for bad in (lambda: cs.ideal_qfi(10, -1.0, 0.1), lambda: cs.loss_qfi(4, 1.0, 0.1, 0.1, method="exact")):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")
    print("smoke test passed")


if __name__ == "__main__":
    main()
