"""Quadratic forms with shifts: evaluation, classification, binary
factorization through Q0(y) = y1*y2, stabilizer one-parameter subgroups, and
the signature-indexed exponent table (exact rationals)."""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

SYMMETRY_TOL = 1e-12
DEGENERACY_RTOL = 1e-10  # relative eigenvalue threshold for "zero"
DET_ONE_TOL = 1e-9

Q0_MATRIX = np.array([[0.0, 0.5], [0.5, 0.0]])


class FormError(ValueError):
    pass


def _readonly(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class QuadraticForm:
    """Symmetric matrix A with Q(y) = y^T A y, plus cached invariants."""

    coeffs: np.ndarray
    signature: tuple = field(init=False)
    det: float = field(init=False)

    def __post_init__(self):
        A = np.array(self.coeffs, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise FormError("coefficient matrix must be square")
        if np.max(np.abs(A - A.T)) > SYMMETRY_TOL:
            raise FormError("coefficient matrix must be symmetric (1e-12)")
        A = 0.5 * (A + A.T)
        object.__setattr__(self, "coeffs", _readonly(A))
        p, q, nullity = signature_of_matrix(A)
        object.__setattr__(self, "signature", (p, q))
        object.__setattr__(self, "det", float(np.linalg.det(A)))

    @property
    def dim(self):
        return self.coeffs.shape[0]

    @property
    def nondegenerate(self):
        return abs(self.det) > 1e-12

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        return float(y @ self.coeffs @ y)

    def scaled(self, c):
        return QuadraticForm(c * np.asarray(self.coeffs))

    def to_json(self, shift=None):
        xi = [0.0] * self.dim if shift is None else [float(v) for v in shift]
        return {
            "dim": self.dim,
            "coeffs": [float(v) for v in np.asarray(self.coeffs).ravel()],
            "shift": xi,
        }


def form_from_json(obj):
    n = int(obj["dim"])
    A = np.asarray(obj["coeffs"], dtype=float).reshape(n, n)
    shift = np.asarray(obj.get("shift", [0.0] * n), dtype=float)
    return InhomogeneousForm(QuadraticForm(A), shift)


@dataclass(frozen=True)
class InhomogeneousForm:
    """A form together with a shift: value at y is Q(y + shift)."""

    form: QuadraticForm
    shift: np.ndarray

    def __post_init__(self):
        xi = np.asarray(self.shift, dtype=float).reshape(-1)
        if xi.shape[0] != self.form.dim:
            raise FormError("shift length must equal form dimension")
        object.__setattr__(self, "shift", _readonly(xi))

    @property
    def dim(self):
        return self.form.dim

    def __call__(self, y):
        return evaluate_inhomogeneous(self, y)

    def to_json(self):
        return self.form.to_json(self.shift)


@dataclass(frozen=True)
class AffineMapElement:
    """Element (g, v) of SL(2,R) x| R^2 acting by y -> g y + v.

    Composition is (g,v)(h,w) = (gh, gw+v), matching the action.
    """

    linear: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        g = np.array(self.linear, dtype=float)
        v = np.array(self.translation, dtype=float).reshape(-1)
        if g.shape != (2, 2) or v.shape != (2,):
            raise FormError("affine map element needs a 2x2 matrix and a 2-vector")
        if abs(np.linalg.det(g) - 1.0) > DET_ONE_TOL:
            raise FormError("linear part must have determinant 1 (1e-9)")
        object.__setattr__(self, "linear", _readonly(g))
        object.__setattr__(self, "translation", _readonly(v))

    def apply(self, y):
        return self.linear @ np.asarray(y, dtype=float) + self.translation

    def compose(self, other):
        return AffineMapElement(
            self.linear @ other.linear,
            self.linear @ other.translation + self.translation,
        )

    def inverse(self):
        ginv = np.linalg.inv(self.linear)
        return AffineMapElement(ginv, -ginv @ self.translation)

    @staticmethod
    def identity():
        return AffineMapElement(np.eye(2), np.zeros(2))


@dataclass(frozen=True)
class BinaryDecomposition:
    """Factorization Q_shift(y) = lam * Q0(map . y) of an indefinite binary
    form, with Q0(y1,y2) = y1*y2."""

    lam: float
    map: AffineMapElement

    def reconstruct(self):
        """Coefficient matrix lam * g^T Q0 g of the homogeneous part."""
        g = self.map.linear
        return self.lam * (g.T @ Q0_MATRIX @ g)


@dataclass(frozen=True)
class SignatureExponents:
    signature: tuple
    kappa0: Fraction
    kappa1: Fraction


def evaluate_inhomogeneous(f, y):
    """(y + shift)^T A (y + shift)."""
    y = np.asarray(y, dtype=float).reshape(-1)
    if y.shape[0] != f.dim:
        raise FormError(f"point has dimension {y.shape[0]}, form has {f.dim}")
    u = y + f.shift
    return float(u @ f.form.coeffs @ u)


def signature_of_matrix(A):
    """(positives, negatives, nullity) of the eigenvalues, with a 1e-10
    threshold relative to the largest magnitude."""
    eig = np.linalg.eigvalsh(np.asarray(A, dtype=float))
    scale = np.max(np.abs(eig)) if eig.size else 0.0
    cut = DEGENERACY_RTOL * scale
    p = int(np.sum(eig > cut))
    q = int(np.sum(eig < -cut))
    return p, q, eig.size - p - q


def signature_of(Q):
    return signature_of_matrix(Q.coeffs)


def decompose_binary(f):
    """Write an indefinite nondegenerate binary f as lam * Q0((g, g xi) . y).

    The representative is pinned by construction: eigenvectors ordered
    (positive, negative), det(P) = +1, and g is sign-flipped so its first
    row leads with a positive entry (global flips leave Q0 o g unchanged).
    """
    if f.dim != 2:
        raise FormError("binary decomposition needs a 2-dimensional form")
    A = np.asarray(f.form.coeffs)
    p, q, nullity = signature_of_matrix(A)
    if nullity or (p, q) != (1, 1):
        raise FormError("binary decomposition needs signature (1,1)")
    evals, P = np.linalg.eigh(A)
    # eigh sorts ascending: reorder to (positive, negative)
    order = [1, 0]
    evals = evals[order]
    P = P[:, order]
    if np.linalg.det(P) < 0:
        P = P.copy()
        P[:, 1] = -P[:, 1]
    d_pos, d_neg = float(evals[0]), float(evals[1])
    mu = np.sqrt(-d_neg / d_pos)
    V = np.array([[1.0, -mu], [1.0, mu]])
    det_v = 2.0 * mu
    g = (V / np.sqrt(det_v)) @ P.T
    lam = d_pos * det_v
    row = g[0]
    lead = row[0] if row[0] != 0.0 else row[1]
    if lead < 0:
        g = -g
    amap = AffineMapElement(g, g @ f.shift)
    return BinaryDecomposition(lam, amap)


def stabilizer_element(f, t):
    """One-parameter symmetry S(t) of f: conjugate of diag(e^t, e^-t) by the
    binary decomposition map.  Satisfies f(S(t).y) = f(y) and the group law
    S(s)S(t) = S(s+t)."""
    dec = decompose_binary(f)
    bt = AffineMapElement(np.diag([np.exp(t), np.exp(-t)]), np.zeros(2))
    a = dec.map
    return a.inverse().compose(bt).compose(a)


_KAPPA_SPECIAL = {
    (2, 1): Fraction(1),
    (2, 2): Fraction(2),
    (4, 2): Fraction(3, 2),
    (3, 3): Fraction(3, 2),
    (6, 3): Fraction(5, 2),
}

_KAPPA1_MOD4 = {
    0: lambda n: Fraction(1, n),
    1: lambda n: Fraction(1, n - 1),
    2: lambda n: Fraction(1, n - 2),
    3: lambda n: Fraction(1, n + 1),
}


def kappa_table(signature):
    """Exact exponent pair for a signature (p, q), p >= q >= 1, p+q >= 3.

    Special rows take precedence; the generic rows use the n mod 4 table for
    kappa1 and kappa0 = 2*kappa1*q*(p-1).  For the special rows kappa1 is
    recovered from kappa0 via the same relation.
    """
    p, q = int(signature[0]), int(signature[1])
    n = p + q
    if not (p >= q >= 1) or n < 3:
        raise FormError(f"invalid signature ({p},{q}): need p >= q >= 1, p+q >= 3")
    if (p, q) in _KAPPA_SPECIAL:
        k0 = _KAPPA_SPECIAL[(p, q)]
    elif q == 1:
        k0 = Fraction(2)  # (n-1, 1) for n >= 4
    else:
        k1 = _KAPPA1_MOD4[n % 4](n)
        k0 = 2 * k1 * q * (p - 1)
        return SignatureExponents((p, q), k0, k1)
    return SignatureExponents((p, q), k0, k0 / (2 * q * (p - 1)))


def _phi():
    return (1.0 + np.sqrt(5.0)) / 2.0


NAMED_FORMS = {
    "q0": lambda: InhomogeneousForm(QuadraticForm(Q0_MATRIX), np.zeros(2)),
    "pell": lambda: InhomogeneousForm(
        QuadraticForm(np.diag([1.0, -2.0])), np.zeros(2)),
    "golden": lambda: InhomogeneousForm(
        QuadraticForm(np.diag([1.0, -_phi() ** 2])), np.zeros(2)),
    "ternary-sqrt2": lambda: InhomogeneousForm(
        QuadraticForm(np.diag([1.0, 1.0, -np.sqrt(2.0)])), np.zeros(3)),
}


def named_form(name):
    try:
        return NAMED_FORMS[name]()
    except KeyError:
        raise FormError(
            f"unknown form {name!r}; built-ins: {sorted(NAMED_FORMS)}") from None


def fraction_str(x):
    """Exact rationals serialize as 'p/q' strings."""
    return f"{x.numerator}/{x.denominator}"
