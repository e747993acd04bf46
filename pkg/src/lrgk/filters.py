"""Kernel spectral functions and Chebyshev polynomial filtering on [0, 2].

A filter is a coefficient vector c_0..c_M with the evaluation convention

    p(lam) = c_0/2 + sum_{j=1..M} c_j T_j(lam - 1),

i.e. the domain [0, 2] is mapped onto [-1, 1] by x = lam - 1 (the
normalized Laplacian needs no spectrum estimation).  Block filtering
p(L) X uses the three-term recurrence with exactly M operator
applications; scalar evaluation uses Clenshaw recursion via
numpy.polynomial.chebyshev.
"""

import json
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.chebyshev import chebval

from .errors import DimensionMismatch, NonFiniteSample, ParameterOutOfDomain

KERNEL_KINDS = (
    "d-regularized-laplacian",
    "two-step-random-walk",
    "diffusion",
    "inverse-cosine",
    "custom-tabulated",
)

_SHAPE_GRID = 1001  # grid used to check h(0)=1, h >= 0, h non-increasing


@dataclass(frozen=True)
class KernelFunction:
    """Decreasing spectral profile h on [0, 2] with h(0) = 1.

    kind selects the formula:
      d-regularized-laplacian : (1 + sigma^2 lam)^(-d)
      two-step-random-walk    : (1 - lam/sigma)^2, sigma >= 2
      diffusion               : exp(-sigma^2 lam)
      inverse-cosine          : cos(sigma^2 lam pi / 4), 0 < sigma <= 1
      custom-tabulated        : linear interpolation of `table` sampled
                                uniformly on [0, 2]
    """

    kind: str
    sigma: float = 1.0
    d: int = 1
    table: tuple = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in KERNEL_KINDS:
            raise ParameterOutOfDomain(f"unknown kernel kind {self.kind!r}")
        s = self.sigma
        if self.kind == "d-regularized-laplacian":
            if not (s > 0) or self.d < 1 or int(self.d) != self.d:
                raise ParameterOutOfDomain(f"d-regularized needs sigma > 0, integer d >= 1 (got sigma={s}, d={self.d})")
        elif self.kind == "two-step-random-walk":
            if not s >= 2:
                raise ParameterOutOfDomain(f"two-step random walk needs sigma >= 2, got {s}")
        elif self.kind == "diffusion":
            if not s > 0:
                raise ParameterOutOfDomain(f"diffusion needs sigma > 0, got {s}")
        elif self.kind == "inverse-cosine":
            if not 0 < s <= 1:
                raise ParameterOutOfDomain(f"inverse cosine needs 0 < sigma <= 1, got {s}")
        else:  # custom-tabulated
            if self.table is None or len(self.table) < 2:
                raise ParameterOutOfDomain("custom-tabulated needs a table with >= 2 samples")
            object.__setattr__(self, "table", tuple(float(v) for v in self.table))
        self._check_shape()

    def _check_shape(self):
        lam = np.linspace(0.0, 2.0, _SHAPE_GRID)
        vals = self(lam)
        if not np.all(np.isfinite(vals)):
            raise ParameterOutOfDomain(f"{self.kind}: non-finite values on [0, 2]")
        if abs(vals[0] - 1.0) > 1e-9:
            raise ParameterOutOfDomain(f"{self.kind}: h(0) = {vals[0]}, expected 1")
        # "positive" admits h(2) = 0 (two-step sigma=2, inverse-cosine sigma=1).
        if np.min(vals) < -1e-12:
            raise ParameterOutOfDomain(f"{self.kind}: negative values on [0, 2]")
        if np.max(np.diff(vals)) > 1e-12:
            raise ParameterOutOfDomain(f"{self.kind}: not non-increasing on [0, 2]")

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=np.float64)
        s = self.sigma
        if self.kind == "d-regularized-laplacian":
            out = (1.0 + s * s * lam) ** (-self.d)
        elif self.kind == "two-step-random-walk":
            out = (1.0 - lam / s) ** 2
        elif self.kind == "diffusion":
            out = np.exp(-s * s * lam)
        elif self.kind == "inverse-cosine":
            out = np.cos(s * s * lam * np.pi / 4.0)
        else:
            grid = np.linspace(0.0, 2.0, len(self.table))
            out = np.interp(lam, grid, np.asarray(self.table))
        return out if out.ndim else float(out)

    def sqrt_values(self, lam):
        """h^{1/2}(lam); tiny negative round-off is clamped to 0."""
        return np.sqrt(np.maximum(self(lam), 0.0))


def eval_kernel_function(h, lam):
    """Scalar/array evaluation of a kernel spectral function."""
    return h(lam)


@dataclass(frozen=True)
class ChebyshevFilter:
    """Degree-M polynomial on [0, 2] in the c_0/2 + sum c_j T_j(lam-1) form.

    `coefficients` already include any damping; `damping` records what was
    applied and `target` is a free-form description for diagnostics.
    """

    degree: int
    coefficients: tuple
    damping: str = "none"
    target: str = ""

    def __post_init__(self):
        c = tuple(float(v) for v in self.coefficients)
        if len(c) != self.degree + 1:
            raise DimensionMismatch(f"need degree+1={self.degree + 1} coefficients, got {len(c)}")
        object.__setattr__(self, "coefficients", c)

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=np.float64)
        c = np.array(self.coefficients)
        c[0] *= 0.5
        out = chebval(lam - 1.0, c)
        return out if out.ndim else float(out)

    def to_dict(self):
        return {
            "degree": self.degree,
            "damping": self.damping,
            "coefficients": list(self.coefficients),
            "target": self.target,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            degree=int(d["degree"]),
            coefficients=tuple(d["coefficients"]),
            damping=d.get("damping", "none"),
            target=d.get("target", ""),
        )

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def jackson_damping(m):
    """Damping factors g_0..g_M suppressing Gibbs oscillations.

    g_j = ((M+1-j) cos(pi j/(M+1)) + sin(pi j/(M+1)) cot(pi/(M+1))) / (M+1),
    with g_0 = 1 and g_j in (0, 1].
    """
    if m < 0:
        raise ParameterOutOfDomain(f"degree must be >= 0, got {m}")
    j = np.arange(m + 1, dtype=np.float64)
    q = np.pi / (m + 1)
    return ((m + 1 - j) * np.cos(q * j) + np.sin(q * j) / np.tan(q)) / (m + 1)


def _sample(f, lam):
    vals = np.asarray(f(lam), dtype=np.float64)
    if vals.shape != lam.shape:
        vals = np.array([float(f(x)) for x in lam])
    return vals


def chebyshev_coefficients(f, m, damping="none", target=""):
    """Degree-m expansion of f on [0, 2] by Chebyshev-Gauss quadrature.

    c_j = 2/(M+1) * sum_q f(1 + cos theta_q) cos(j theta_q) with
    theta_q = pi (q + 1/2)/(M+1).  Exact for polynomials of degree <= M.
    """
    if m < 0:
        raise ParameterOutOfDomain(f"degree must be >= 0, got {m}")
    if damping not in ("none", "jackson"):
        raise ParameterOutOfDomain(f"unknown damping {damping!r}")
    q = np.arange(m + 1)
    theta = np.pi * (q + 0.5) / (m + 1)
    lam = 1.0 + np.cos(theta)
    vals = _sample(f, lam)
    if not np.all(np.isfinite(vals)):
        bad = lam[~np.isfinite(vals)][0]
        raise NonFiniteSample(f"target returned non-finite value at lambda={bad}")
    jj = np.arange(m + 1)[:, None]
    c = (2.0 / (m + 1)) * np.cos(jj * theta[None, :]) @ vals
    if damping == "jackson":
        c = c * jackson_damping(m)
    return ChebyshevFilter(degree=m, coefficients=tuple(c), damping=damping, target=target)


def indicator_filter(lambda_bar, m, damping="jackson"):
    """Low-pass filter approximating the indicator of [0, lambda_bar]."""
    return chebyshev_coefficients(
        lambda lam: (np.asarray(lam) <= lambda_bar).astype(np.float64),
        m,
        damping=damping,
        target=f"indicator[0,{lambda_bar:.8g}]",
    )


def kernel_sqrt_filter(h, m):
    """Undamped expansion of h^{1/2}; h^{1/2} is smooth so no damping needed."""
    return chebyshev_coefficients(h.sqrt_values, m, damping="none", target=f"sqrt({h.kind})")


def apply_filter(op, filt, x):
    """Compute p(L) X by the shifted three-term recurrence.

    With A = L - I: T_0 X = X, T_1 X = A X, T_{j+1} X = 2 A T_j X - T_{j-1} X;
    exactly M operator applications, scratch memory of three blocks.
    """
    x = np.asarray(x, dtype=np.float64)
    squeeze = x.ndim == 1
    if squeeze:
        x = x[:, None]
    if x.ndim != 2 or x.shape[0] != op.shape[0]:
        raise DimensionMismatch(f"block of shape {x.shape} incompatible with N={op.shape[0]}")
    c = filt.coefficients
    acc = 0.5 * c[0] * x
    if filt.degree >= 1:
        t_prev = x
        t_cur = op.matvec(x) - x
        acc = acc + c[1] * t_cur
        for j in range(2, filt.degree + 1):
            t_next = 2.0 * (op.matvec(t_cur) - t_cur) - t_prev
            acc = acc + c[j] * t_next
            t_prev, t_cur = t_cur, t_next
    return acc[:, 0] if squeeze else acc
