"""Named scheme configurations and the ones used in the comparison figures."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from functools import lru_cache
from math import comb
from typing import Optional

from .codebook import CM, OFDM, OFDM_IM, WCM, Codebook, build_cm, build_ofdm, build_ofdm_im, build_wcm
from .combinatorics import count_strict, count_weak
from .selection import cull

__all__ = ["SchemeSpec", "build", "FIG1_SCHEMES", "FIG2_SCHEMES", "ALL_SCHEMES", "parse_scheme"]

_ALIASES = {
    "wcm": WCM, "ofdm-wcm": WCM,
    "cm": CM, "ofdm-cm": CM,
    "im": OFDM_IM, "ofdm-im": OFDM_IM, "ofdm_im": OFDM_IM,
    "ofdm": OFDM,
}


@dataclass(frozen=True)
class SchemeSpec:
    """Parameters that pin down one codebook.

    Only the fields a scheme uses are consulted: ``I, N, lam`` for WCM,
    ``I, N, M`` for CM, ``N, K, M`` for OFDM-IM and ``N, M`` for OFDM.
    ``cull_bits`` runs the culling pass down to ``2**cull_bits`` codewords.
    """

    scheme: str
    N: int
    I: Optional[int] = None
    lam: Optional[int] = None
    M: Optional[int] = None
    K: Optional[int] = None
    cull_bits: Optional[int] = None

    def __post_init__(self):
        key = self.scheme.lower()
        if key not in _ALIASES:
            raise ValueError(f"unknown scheme {self.scheme!r}; choose from wcm, cm, im, ofdm")
        object.__setattr__(self, "scheme", _ALIASES[key])
        missing = [name for name in self.required() if getattr(self, name) is None]
        if missing:
            raise ValueError(f"scheme {self.scheme} needs parameter(s): {', '.join(missing)}")
        for name in self.required():
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ValueError(f"{name} must be a positive integer (got {value})")
        if self.M is not None and (self.M < 2 or self.M & (self.M - 1)):
            raise ValueError(f"M must be a power of two >= 2 (got {self.M})")
        if self.scheme == CM and self.I < self.N:
            raise ValueError(f"I must be >= N for composition modulation (got I={self.I}, N={self.N})")
        if self.scheme == OFDM_IM and not 1 <= self.K <= self.N:
            raise ValueError(f"K must satisfy 1 <= K <= N (got K={self.K}, N={self.N})")
        if self.cull_bits is not None and not 1 <= self.cull_bits < self.base_bits:
            raise ValueError(
                f"cull target must satisfy 1 <= bits < {self.base_bits} (got {self.cull_bits})"
            )

    def required(self) -> tuple[str, ...]:
        return {
            WCM: ("I", "N", "lam"),
            CM: ("I", "N", "M"),
            OFDM_IM: ("N", "K", "M"),
            OFDM: ("N", "M"),
        }[self.scheme]

    @property
    def bits(self) -> int:
        """Bits per block of the codebook this spec builds (after culling)."""
        if self.cull_bits is not None:
            return self.cull_bits
        return self.base_bits

    @property
    def base_bits(self) -> int:
        """Bits per block before any culling."""
        lg = lambda n: int(n).bit_length() - 1
        if self.scheme == WCM:
            return lg(count_weak(self.I, self.N)) + self.lam * self.I
        if self.scheme == CM:
            return lg(count_strict(self.I, self.N)) + self.N * lg(self.M)
        if self.scheme == OFDM_IM:
            return lg(comb(self.N, self.K)) + self.K * lg(self.M)
        return self.N * lg(self.M)

    def build(self, E_T: Optional[float] = None) -> Codebook:
        return build(self, E_T)

    @property
    def name(self) -> str:
        if self.scheme == WCM:
            s = f"OFDM-WCM ({self.I}, {self.N}, {self.lam})"
        elif self.scheme == CM:
            s = f"OFDM-CM ({self.I}, {self.N}, {self.M})"
        elif self.scheme == OFDM_IM:
            s = f"OFDM-IM ({self.N}, {self.K}, {self.M})"
        else:
            s = f"OFDM ({self.M}-PSK, N={self.N})"
        if self.cull_bits is not None:
            s += f", culled to {self.cull_bits} bits"
        return s

    @property
    def tag(self) -> str:
        """Compact machine-friendly identifier, e.g. ``wcm-4-4-1-c8``."""
        vals = [getattr(self, k) for k in self.required()]
        s = "-".join([self.scheme.replace("ofdm_", "")] + [str(v) for v in vals])
        return s + (f"-c{self.cull_bits}" if self.cull_bits is not None else "")

    def as_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


@lru_cache(maxsize=32)
def _build_cached(spec: SchemeSpec, E_T: Optional[float]) -> Codebook:
    if spec.scheme == WCM:
        cb = build_wcm(spec.I, spec.N, spec.lam, E_T)
    elif spec.scheme == CM:
        cb = build_cm(spec.I, spec.N, spec.M, E_T)
    elif spec.scheme == OFDM_IM:
        cb = build_ofdm_im(spec.N, spec.K, spec.M, E_T)
    else:
        cb = build_ofdm(spec.N, spec.M, E_T)
    if spec.cull_bits is not None:
        cb = cull(cb, spec.cull_bits)
    return cb


def build(spec: SchemeSpec, E_T: Optional[float] = None) -> Codebook:
    """Construct (and cache) the codebook described by ``spec``."""
    return _build_cached(spec, None if E_T is None else float(E_T))


def parse_scheme(text: str) -> SchemeSpec:
    """Parse ``"wcm,i=4,n=4,lambda=1,cull=8"`` style scheme descriptions."""
    head, *rest = [t.strip() for t in text.split(",") if t.strip()]
    keys = {"i": "I", "n": "N", "lambda": "lam", "lam": "lam", "m": "M", "k": "K",
            "cull": "cull_bits", "cull_bits": "cull_bits", "target_bits": "cull_bits"}
    kw = {}
    for item in rest:
        if "=" not in item:
            raise ValueError(f"malformed scheme parameter {item!r} (expected key=value)")
        k, v = item.split("=", 1)
        k = k.strip().lower().replace("-", "_")
        if k not in keys:
            raise ValueError(f"unknown scheme parameter {k!r}")
        kw[keys[k]] = int(v)
    if "N" not in kw:
        raise ValueError("scheme description needs n=<subcarriers>")
    return SchemeSpec(head, **kw)


FIG1_SCHEMES = (
    SchemeSpec("wcm", I=4, N=4, lam=1, cull_bits=8),
    SchemeSpec("cm", I=7, N=4, M=2),
    SchemeSpec("im", N=4, K=3, M=4),
    SchemeSpec("ofdm", N=4, M=4),
)

FIG2_SCHEMES = (
    SchemeSpec("wcm", I=6, N=4, lam=1, cull_bits=11),
    SchemeSpec("cm", I=6, N=4, M=4),
    SchemeSpec("cm", I=12, N=4, M=2),
    SchemeSpec("im", N=4, K=3, M=8),
)

ALL_SCHEMES = FIG1_SCHEMES + FIG2_SCHEMES
