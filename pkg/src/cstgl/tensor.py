"""Third-order tensor algebra under the t-product.

Tensors are plain ``numpy`` arrays of shape ``(n1, n2, n3)``; frontal slice
``k`` is ``t[:, :, k]``. Transforms along mode 3 use the unnormalized forward
DFT, so the inverse carries the ``1/n3`` factor (numpy's convention).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# imaginary residue allowed after an inverse transform, relative to ||s||
IMAG_TOL = 1e-8


class DimensionMismatch(ValueError):
    pass


class SymmetryViolation(ArithmeticError):
    pass


class ConvergenceFailure(ArithmeticError):
    pass


@dataclass(frozen=True)
class TSvdFactors:
    """``t = U * G * V^T``.

    ``sigma_hat`` holds the Fourier-domain singular values, shape
    ``(min(n1, n2), n3)``, each column non-increasing.
    """

    U: np.ndarray
    G: np.ndarray
    V: np.ndarray
    sigma_hat: np.ndarray


def as_tensor3(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if t.ndim != 3 or min(t.shape) < 1:
        raise DimensionMismatch(f"expected a non-empty 3-way array, got shape {t.shape}")
    return t


def frontal_slice(t: np.ndarray, k: int) -> np.ndarray:
    return t[:, :, k]


def fft_mode3(t: np.ndarray) -> np.ndarray:
    return np.fft.fft(as_tensor3(t), axis=2)


def ifft_mode3(s: np.ndarray) -> np.ndarray:
    out = np.fft.ifft(s, axis=2)
    scale = np.linalg.norm(s)
    residue = np.max(np.abs(out.imag)) if out.size else 0.0
    if residue > IMAG_TOL * scale:
        raise SymmetryViolation(
            f"inverse transform left imaginary residue {residue:.3e} (||s|| = {scale:.3e})"
        )
    return np.ascontiguousarray(out.real)


def _half(n3: int) -> int:
    # slices 0..n3//2 determine the rest by conjugate symmetry
    return n3 // 2 + 1


def _mirror(h: np.ndarray) -> np.ndarray:
    """Complete a half spectrum (slices ``0..n3//2``) in place by conjugation."""
    n3 = h.shape[2]
    for k in range(1, (n3 + 1) // 2):
        h[:, :, n3 - k] = np.conj(h[:, :, k])
    return h


def t_transpose(t: np.ndarray) -> np.ndarray:
    """Transpose every frontal slice and reverse the order of slices 2..n3."""
    t = as_tensor3(t)
    out = np.transpose(t, (1, 0, 2))
    return np.concatenate([out[:, :, :1], out[:, :, :0:-1]], axis=2)


def t_identity(n: int, n3: int) -> np.ndarray:
    out = np.zeros((n, n, n3))
    out[:, :, 0] = np.eye(n)
    return out


def t_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a, b = as_tensor3(a), as_tensor3(b)
    if a.shape[1] != b.shape[0] or a.shape[2] != b.shape[2]:
        raise DimensionMismatch(f"cannot t-multiply {a.shape} by {b.shape}")
    n3 = a.shape[2]
    ah, bh = fft_mode3(a), fft_mode3(b)
    ch = np.empty((a.shape[0], b.shape[1], n3), dtype=complex)
    for k in range(_half(n3)):
        ch[:, :, k] = ah[:, :, k] @ bh[:, :, k]
    return ifft_mode3(_mirror(ch))


def _slice_svd(m: np.ndarray, full: bool):
    try:
        return np.linalg.svd(m, full_matrices=full)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc


def t_svd(t: np.ndarray) -> TSvdFactors:
    t = as_tensor3(t)
    n1, n2, n3 = t.shape
    r = min(n1, n2)
    th = fft_mode3(t)
    uh = np.zeros((n1, n1, n3), dtype=complex)
    gh = np.zeros((n1, n2, n3), dtype=complex)
    vh = np.zeros((n2, n2, n3), dtype=complex)
    sig = np.zeros((r, n3))
    for k in range(_half(n3)):
        u, s, vt = _slice_svd(th[:, :, k], full=True)
        uh[:, :, k] = u
        vh[:, :, k] = vt.conj().T
        gh[np.arange(r), np.arange(r), k] = s
        sig[:, k] = s
    for k in range(1, (n3 + 1) // 2):
        sig[:, n3 - k] = sig[:, k]
    return TSvdFactors(
        U=ifft_mode3(_mirror(uh)),
        G=ifft_mode3(_mirror(gh)),
        V=ifft_mode3(_mirror(vh)),
        sigma_hat=sig,
    )


def fourier_singular_values(t: np.ndarray) -> np.ndarray:
    """Singular values of every Fourier slice, shape ``(min(n1, n2), n3)``."""
    th = fft_mode3(t)
    n3 = th.shape[2]
    sig = np.empty((min(th.shape[:2]), n3))
    for k in range(_half(n3)):
        sig[:, k] = np.linalg.svd(th[:, :, k], compute_uv=False)
    for k in range(1, (n3 + 1) // 2):
        sig[:, n3 - k] = sig[:, k]
    return sig


def tensor_nuclear_norm(t: np.ndarray) -> float:
    """Sum over Fourier slices of the slice nuclear norm (no 1/n3 factor)."""
    return float(fourier_singular_values(t).sum())


def tubal_shrinkage(f: np.ndarray, tau: float) -> np.ndarray:
    """Soft-threshold every Fourier-slice singular value by ``tau``.

    This is the minimizer of ``(tau / n3) * ||K||_tnn + 0.5 * ||K - f||_F^2``,
    since the Frobenius norm picks up a factor ``n3`` in the Fourier domain.
    """
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    f = as_tensor3(f)
    n3 = f.shape[2]
    fh = fft_mode3(f)
    kh = np.zeros_like(fh)
    for k in range(_half(n3)):
        u, s, vt = _slice_svd(fh[:, :, k], full=False)
        s = np.maximum(s - tau, 0.0)
        r = int(np.count_nonzero(s))
        if r:
            kh[:, :, k] = (u[:, :r] * s[:r]) @ vt[:r]
    return ifft_mode3(_mirror(kh))


def unfold_mode3(t: np.ndarray) -> np.ndarray:
    """``n3 x (n1*n2)`` matrix; column ``i + j*n1`` is the fiber ``t[i, j, :]``."""
    t = as_tensor3(t)
    n1, n2, n3 = t.shape
    return t.reshape(n1 * n2, n3, order="F").T.copy()


def fold_mode3(m: np.ndarray, dims: tuple[int, int, int]) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    n1, n2, n3 = dims
    if m.shape != (n3, n1 * n2):
        raise DimensionMismatch(f"cannot fold {m.shape} into {dims}")
    return m.T.reshape((n1, n2, n3), order="F").copy()


def norm_l21(t: np.ndarray) -> float:
    """Sum of the l2 norms of the mode-3 fibers."""
    return float(np.linalg.norm(as_tensor3(t), axis=2).sum())
