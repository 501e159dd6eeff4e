import numpy as np
import pytest


def rand_complex(rng, n, m=None):
    m = n if m is None else m
    return (rng.normal(size=(n, m)) + 1j * rng.normal(size=(n, m))) / np.sqrt(2)


def rand_unitary(rng, n):
    q, r = np.linalg.qr(rand_complex(rng, n))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def rand_pd(rng, n, cond=100.0):
    lam = np.exp(rng.uniform(-0.5, 0.5, size=n) * np.log(cond))
    u = rand_unitary(rng, n)
    m = (u * lam) @ u.conj().T
    return 0.5 * (m + m.conj().T)


def rand_hermitian(rng, n):
    g = rand_complex(rng, n)
    return g + g.conj().T


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# criterion number -> list of (label, ok, detail); filled by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE, key=int):
        parts = ACCEPTANCE[num]
        ok = all(p[1] for p in parts)
        detail = "; ".join(f"{label}: {'ok' if good else 'FAILED'} ({text})" for label, good, text in parts)
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'} | {detail}")
