"""The Hamming-syndrome block condenser, its streaming form, and output
analysis.

A structured condenser splits its input into k blocks of 2**d - 1 bits and
emits the d-bit coset label of each block, mapping k*(2**d - 1) bits down
to k*d bits.  For strong SV_delta inputs the output min-entropy rate is at
least 1 - (1/d)*log2((1+delta)/(1-delta)).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import BinaryIO, List, Optional, Sequence, Tuple, Union

import numpy as np

from .bitdist import (
    DimensionMismatchError,
    FileFormatError,
    JointDistribution,
    SizeLimitError,
    check_width,
    min_entropy,
    pushforward,
)
from .hamming import MAX_D, MIN_D, HammingCode, syndromes_of_bit_matrix
from .sv_models import SVParams


@functools.lru_cache(maxsize=None)
def _syndrome_lut(d: int) -> np.ndarray:
    code = HammingCode(d)
    return np.fromiter(
        (code.syndrome(b) for b in range(1 << code.block_len)),
        dtype=np.int64,
        count=1 << code.block_len,
    )


class CondenserMap:
    """A function from n-bit strings to m-bit strings.

    Either structured (the blockwise syndrome map for parameters d, k) or
    an explicit output table.  Structured maps evaluate lazily per block;
    tables exist for attack targets and tests.
    """

    __slots__ = ("n", "m", "d", "k", "_table")

    def __init__(self, n, m, d=None, k=None, table=None):
        if (d is None) != (k is None) or ((d is None) == (table is None)):
            raise ValueError("provide either (d, k) or a table")
        if table is not None:
            check_width(n)
            vec = np.array(table, dtype=np.int64, copy=True)
            if vec.shape != (1 << n,):
                raise DimensionMismatchError(f"table must have {1 << n} entries")
            if m < 1 or np.any(vec < 0) or np.any(vec >= (1 << m)):
                raise ValueError(f"table entries must fit in {m} bits")
            vec.setflags(write=False)
        else:
            code = HammingCode(d)
            if k < 1:
                raise ValueError(f"block count must be positive, got {k}")
            if n != k * code.block_len or m != k * d:
                raise DimensionMismatchError(
                    f"structured map needs n = k*(2**d - 1) and m = k*d"
                )
            vec = None
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "_table", vec)

    def __setattr__(self, name, value):
        raise AttributeError("CondenserMap is immutable")

    @classmethod
    def structured(cls, d: int, k: int) -> "CondenserMap":
        bl = (1 << d) - 1
        return cls(k * bl, k * d, d=d, k=k)

    @classmethod
    def from_table(cls, n: int, m: int, table) -> "CondenserMap":
        return cls(n, m, table=table)

    @classmethod
    def identity(cls, n: int) -> "CondenserMap":
        return cls(n, n, table=np.arange(1 << n))

    @classmethod
    def constant(cls, n: int, m: int, value: int = 0) -> "CondenserMap":
        return cls(n, m, table=np.full(1 << n, value))

    @property
    def is_structured(self) -> bool:
        return self._table is None

    def __call__(self, x: int) -> int:
        if not 0 <= x < (1 << self.n):
            raise ValueError(f"input {x} does not fit in {self.n} bits")
        if self._table is not None:
            return int(self._table[x])
        code = HammingCode(self.d)
        bl = code.block_len
        mask = (1 << bl) - 1
        out = 0
        for j in range(self.k - 1, -1, -1):
            out |= code.syndrome((x >> (j * bl)) & mask) << (j * self.d)
        return out

    def table(self) -> np.ndarray:
        """Full output vector over all 2**n inputs."""
        if self._table is not None:
            return self._table
        check_width(self.n)
        lut = _syndrome_lut(self.d)
        bl = (1 << self.d) - 1
        mask = (1 << bl) - 1
        idx = np.arange(1 << self.n, dtype=np.int64)
        out = np.zeros(1 << self.n, dtype=np.int64)
        for j in range(self.k - 1, -1, -1):
            out |= lut[(idx >> (j * bl)) & mask] << (j * self.d)
        return out

    def to_obj(self) -> dict:
        return {"n": self.n, "m": self.m, "table": [int(v) for v in self.table()]}

    @classmethod
    def from_obj(cls, obj) -> "CondenserMap":
        if not isinstance(obj, dict):
            raise FileFormatError("condenser table file must be a JSON object")
        for key in ("n", "m", "table"):
            if key not in obj:
                raise FileFormatError(f'condenser table file needs key "{key}"')
        try:
            return cls.from_table(obj["n"], obj["m"], obj["table"])
        except (ValueError, TypeError) as exc:
            raise FileFormatError(str(exc)) from exc


def load_condenser_table(fp) -> CondenserMap:
    import json

    return CondenserMap.from_obj(json.load(fp))


def condense(d: int, bits: Union[str, Sequence[int]]):
    """Blockwise syndrome condensing of a bit sequence.

    Input length must be a positive multiple of 2**d - 1.  A 0/1 string
    comes back as a string; any other sequence of 0/1 ints comes back as a
    list of ints.  Scalar per-block route, independent of the vectorized
    streaming path.
    """
    code = HammingCode(d)
    as_str = isinstance(bits, str)
    text = bits if as_str else "".join(str(int(b)) for b in bits)
    if set(text) - {"0", "1"}:
        raise ValueError("input bits must be 0 or 1")
    bl = code.block_len
    if len(text) == 0 or len(text) % bl:
        raise DimensionMismatchError(
            f"input length {len(text)} is not a positive multiple of {bl}"
        )
    pieces = [
        format(code.syndrome(int(text[i : i + bl], 2)), f"0{d}b")
        for i in range(0, len(text), bl)
    ]
    out = "".join(pieces)
    return out if as_str else [int(c) for c in out]


@dataclass(frozen=True)
class StreamStats:
    """Byte/bit accounting for one streaming pass."""

    d: int
    blocks: int
    bytes_in: int
    bytes_out: int
    input_tail_bits: int   # trailing bits that never filled a block
    output_tail_bits: int  # produced bits that never filled a byte

    def summary(self) -> str:
        return (
            f"d={self.d} blocks={self.blocks} bytes_in={self.bytes_in} "
            f"bytes_out={self.bytes_out} input_tail_bits={self.input_tail_bits} "
            f"output_tail_bits={self.output_tail_bits}"
        )


def condense_stream(
    d: int, src: BinaryIO, dst: BinaryIO, chunk_size: int = 1 << 16
) -> StreamStats:
    """Streaming condenser over raw bytes, MSB-first bit order.

    Bits are grouped into blocks of 2**d - 1, syndromes are emitted and
    repacked into bytes.  Tail policy is drop-and-count, never pad: padding
    would inject bits the blockwise map never produced.  Output is
    bit-exact equal to `condense` on the input truncated to whole blocks.
    """
    if not MIN_D <= d <= MAX_D:
        raise ValueError(f"d must be in {MIN_D}..{MAX_D}, got {d}")
    bl = (1 << d) - 1
    shifts = np.arange(d - 1, -1, -1, dtype=np.uint16)
    pending_in = np.empty(0, dtype=np.uint8)
    pending_out = np.empty(0, dtype=np.uint8)
    blocks = 0
    bytes_in = 0
    bytes_out = 0
    while True:
        chunk = src.read(chunk_size)
        if not chunk:
            break
        bytes_in += len(chunk)
        bits = np.unpackbits(np.frombuffer(chunk, dtype=np.uint8))
        if pending_in.size:
            bits = np.concatenate((pending_in, bits))
        whole = bits.size // bl
        pending_in = bits[whole * bl :]
        if whole == 0:
            continue
        syn = syndromes_of_bit_matrix(d, bits[: whole * bl].reshape(whole, bl))
        blocks += whole
        out_bits = ((syn[:, None] >> shifts) & 1).astype(np.uint8).reshape(-1)
        if pending_out.size:
            out_bits = np.concatenate((pending_out, out_bits))
        whole_bytes = out_bits.size // 8
        pending_out = out_bits[whole_bytes * 8 :]
        if whole_bytes:
            dst.write(np.packbits(out_bits[: whole_bytes * 8]).tobytes())
            bytes_out += whole_bytes
    return StreamStats(
        d=d,
        blocks=blocks,
        bytes_in=bytes_in,
        bytes_out=bytes_out,
        input_tail_bits=int(pending_in.size),
        output_tail_bits=int(pending_out.size),
    )


def imbalance_ratio(nu: JointDistribution) -> float:
    """Largest probability ratio between two outcomes; inf on any zero entry."""
    mn = float(np.min(nu.probs))
    mx = float(np.max(nu.probs))
    if mn <= 0.0:
        return math.inf
    return mx / mn


@dataclass(frozen=True)
class RateBound:
    """Closed-form condenser guarantee for parameters (d, delta)."""

    compression: float  # output bits per input bit: d / (2**d - 1)
    rate_bound: float   # guaranteed output min-entropy rate
    vacuous: bool       # the guarantee is non-positive


def theoretical_rate(d: int, delta: float) -> RateBound:
    """Compression factor and min-entropy-rate guarantee of the d-condenser."""
    if d < MIN_D:
        raise ValueError(f"d must be >= {MIN_D}, got {d}")
    if not 0.0 <= delta < 1.0:
        raise ValueError(f"bias must be in [0, 1), got {delta}")
    compression = d / ((1 << d) - 1)
    rate = 1.0 - math.log2((1.0 + delta) / (1.0 - delta)) / d
    return RateBound(compression, rate, rate <= 0.0)


@dataclass(frozen=True)
class CondenserReport:
    """Exact output analysis of one condenser on one input distribution."""

    n: int
    m: int
    delta: float
    input_min_entropy: float
    input_rate: float
    output_min_entropy: float
    output_rate: float
    imbalance_ratio: float
    bound_bits: Optional[float]   # total min-entropy guarantee, structured only
    rate_bound: Optional[float]   # bound_bits / m
    el3_floor: Optional[float]    # single-block imbalance floor, k = 1 only
    vacuous: Optional[bool]


def analyze_condenser(
    h: CondenserMap, mu: JointDistribution, delta: float
) -> CondenserReport:
    """Push mu through h and compare the exact output min-entropy with the
    closed-form guarantees (which apply when mu is strong SV at bias delta)."""
    if h.n != mu.n:
        raise DimensionMismatchError(f"condenser takes {h.n} bits, source has {mu.n}")
    SVParams(mu.n, delta)
    out = pushforward(mu, h)
    h_in = min_entropy(mu)
    h_out = min_entropy(out)
    bound_bits = rate_bound = el3 = vac = None
    if h.is_structured:
        rb = theoretical_rate(h.d, delta)
        rate_bound = rb.rate_bound
        bound_bits = h.m * rb.rate_bound
        vac = rb.vacuous
        if h.k == 1:
            el3 = h.d - math.log2((1.0 + delta) / (1.0 - delta))
    return CondenserReport(
        n=h.n,
        m=h.m,
        delta=delta,
        input_min_entropy=h_in,
        input_rate=h_in / h.n,
        output_min_entropy=h_out,
        output_rate=h_out / h.m,
        imbalance_ratio=imbalance_ratio(out),
        bound_bits=bound_bits,
        rate_bound=rate_bound,
        el3_floor=el3,
        vacuous=vac,
    )
