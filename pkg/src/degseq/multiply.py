"""Large-product backend: grouped Kronecker packing onto GMP integers.

Sparse schoolbook multiplication dies on the iterate blowup (hundreds of
thousands of terms, coefficients hundreds of bits wide), so big products are
mapped onto huge-integer arithmetic instead:

  * coefficients travel as little-endian uint64 limb matrices, so numpy
    moves the bulk data and nothing touches Python objects per term;
  * a chosen set of "packed" variables is flattened into fixed-width slots
    of one flat limb buffer per term group (grouping is by the exponents of
    the remaining variables);
  * per-group base offsets plus a common slot stride strip the padding that
    structured supports (parity lattices, shifted windows) would otherwise
    leave inside the packed buffers, because GMP pays full price for
    interior zeros;
  * when one operand has few terms, products accumulate via mpn_addmul_1
    (payload times one 64-bit coefficient digit, fused into the result
    buffer), which costs the true limb work instead of the squared slot
    width that multiplying two padded integers would; dense-by-dense pairs
    fall back to one big gmpy2 product per group pair;
  * an optional addend polynomial is scattered into the result buffers
    before accumulation, so composition chains fold their "+ lower terms"
    step into the multiply for free;
  * result slots are read back out vectorized.

Slot widths come from a provable bound (max coefficient magnitudes plus the
maximal number of colliding term pairs), so slots cannot carry into their
neighbors.  Signs are handled by keeping separate positive and negative
buffers per result group; a homogeneous operand pair drops its widest
variable and recovers the exponent from the total degree.

Everything here works on integer content: Q coefficients are cleared of
denominators on entry (callers keep the rational scale where they need it),
F_p residues are lifted to Z and reduced after unpacking.
"""

from __future__ import annotations

import ctypes
import ctypes.util
import sys
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

import gmpy2
import numpy as np

from .budget import DEFAULT_TERM_BUDGET, BudgetExceeded, check_terms, current_budget
from .fields import QQ, PrimeField
from .polynomials import Polynomial

if sys.byteorder != "little":
    raise ImportError("the packing engine assumes a little-endian host")

# products with at most this many coefficient pairs take the plain dict path
SMALL_PAIR_LIMIT = 1 << 16
SLOT_CAP = 1 << 25            # max packed slots per term group
BUF_CAP = 256_000_000         # max bytes for one packed group buffer
KEY_SPACE_CAP = 1 << 62       # group keys / slot indices must fit in int64
PACK_RANGE_FRACTION = 8       # pack vars whose range is within this of the top
TERM_LOOP_CAP = 4096          # max terms on the small side of the addmul loop
# work caps per multiplication call, scaled by the active term budget; the
# term budget alone cannot catch coefficient blowup (few terms, huge limbs)
TERM_WORK_CAP = 1 << 39       # addmul limb operations
BIG_WORK_CAP = 1 << 31        # limbs of mpz operand traffic
PAIR_OVERHEAD_LIMBS = 4096    # per-pair cost of the python/mpz round trip
_MASK32 = np.uint64(0xFFFFFFFF)
_MASK64 = (1 << 64) - 1


def _probe_binary_format() -> bool:
    """Check that gmpy2.to_binary is a 2-byte header + little-endian magnitude."""
    try:
        for v in (1, 255, 256, 2**63, 2**64 + 5, 3**200):
            raw = gmpy2.to_binary(gmpy2.mpz(v))
            if bytes(raw[2:]) != v.to_bytes((v.bit_length() + 7) // 8, "little"):
                return False
        if gmpy2.from_binary(b"\x01\x01" + (5).to_bytes(4, "little")) != 5:
            return False
    except Exception:
        return False
    return True


_FAST_BINARY = _probe_binary_format()
_POS_HDR = b"\x01\x01"


def _load_addmul_1():
    """Bind GMP's fused limb-vector multiply-accumulate, or None."""
    try:
        path = ctypes.util.find_library("gmp")
        if not path:
            return None
        fn = ctypes.CDLL(path).__gmpn_addmul_1
        fn.restype = ctypes.c_uint64
        fn.argtypes = [ctypes.c_void_p, ctypes.c_void_p, ctypes.c_long, ctypes.c_uint64]
        dst = np.array([1, 0], dtype=np.uint64)
        src = np.array([2**63 + 5], dtype=np.uint64)
        carry = fn(dst.ctypes.data, src.ctypes.data, 1, 3)
        if int(dst[0]) + (int(carry) << 64) != 1 + (2**63 + 5) * 3 or dst[1] != 0:
            return None
        return fn
    except Exception:
        return None


_ADDMUL1 = _load_addmul_1()


def _mpz_from_payload(payload: bytes):
    if _FAST_BINARY:
        return gmpy2.from_binary(_POS_HDR + payload)
    return gmpy2.mpz(int.from_bytes(payload, "little"))


def _payload_of(x, nbytes: int) -> bytes:
    if _FAST_BINARY:
        raw = bytes(gmpy2.to_binary(x)[2:])
    else:
        v = int(x)
        raw = v.to_bytes((v.bit_length() + 7) // 8, "little") if v else b""
    if len(raw) < nbytes:
        return raw + b"\x00" * (nbytes - len(raw))
    return raw[:nbytes]  # higher bytes are zero by the slot-width bound


@dataclass
class ArrayPoly:
    """Integer-content sparse polynomial in engine form.

    exps: (T, nvars) int64 exponent rows, pairwise distinct.
    mags: (T, limbs) uint64 coefficient magnitudes, little-endian, limbs >= 1.
    negs: (T,) bool sign flags.  No row is all-zero.
    """

    nvars: int
    exps: np.ndarray
    mags: np.ndarray
    negs: np.ndarray

    def __len__(self):
        return self.exps.shape[0]

    def is_zero(self) -> bool:
        return self.exps.shape[0] == 0

    def degree(self):
        if self.is_zero():
            return float("-inf")
        return int(self.exps.sum(axis=1).max())

    def is_homogeneous(self) -> bool:
        if len(self) <= 1:
            return True
        sums = self.exps.sum(axis=1)
        return bool((sums == sums[0]).all())

    def is_monomial(self) -> bool:
        return len(self) == 1

    def max_ranges(self) -> np.ndarray:
        if self.is_zero():
            return np.zeros(self.nvars, dtype=np.int64)
        return self.exps.max(axis=0)

    def min_exponent(self, var: int) -> int:
        if self.is_zero():
            raise ValueError("zero polynomial has no exponents")
        return int(self.exps[:, var].min())

    def shift_var(self, var: int, delta: int) -> "ArrayPoly":
        """Multiply (delta > 0) or exactly divide (delta < 0) by x_var^|delta|."""
        if self.is_zero() or delta == 0:
            return self
        exps = self.exps.copy()
        exps[:, var] += delta
        if delta < 0 and int(exps[:, var].min()) < 0:
            raise ValueError("inexact monomial division")
        return ArrayPoly(self.nvars, exps, self.mags, self.negs)


def zero_array(nvars: int) -> ArrayPoly:
    return ArrayPoly(
        nvars,
        np.zeros((0, nvars), dtype=np.int64),
        np.zeros((0, 1), dtype=np.uint64),
        np.zeros(0, dtype=bool),
    )


def const_array(nvars: int, value: int) -> ArrayPoly:
    if value == 0:
        return zero_array(nvars)
    mags, negs = _ints_to_limbs([value])
    return ArrayPoly(nvars, np.zeros((1, nvars), dtype=np.int64), mags, negs)


def _ints_to_limbs(values: list) -> tuple[np.ndarray, np.ndarray]:
    negs = np.fromiter((v < 0 for v in values), dtype=bool, count=len(values))
    width = max((abs(v).bit_length() for v in values), default=1)
    nbytes = max(8, ((width + 63) // 64) * 8)
    buf = bytearray(len(values) * nbytes)
    for i, v in enumerate(values):
        a = -v if v < 0 else v
        n = (a.bit_length() + 7) // 8
        buf[i * nbytes : i * nbytes + n] = a.to_bytes(n, "little")
    mags = np.frombuffer(bytes(buf), dtype=np.uint64).reshape(len(values), nbytes // 8)
    return mags, negs


def _limbs_to_ints(mags: np.ndarray, negs: np.ndarray) -> list:
    raw = np.ascontiguousarray(mags).tobytes()
    nbytes = mags.shape[1] * 8
    out = []
    for i in range(mags.shape[0]):
        v = int.from_bytes(raw[i * nbytes : (i + 1) * nbytes], "little")
        out.append(-v if negs[i] else v)
    return out


def _max_coeff_bits(ap: ArrayPoly) -> int:
    if ap.is_zero():
        return 0
    for col in range(ap.mags.shape[1] - 1, -1, -1):
        top = int(ap.mags[:, col].max())
        if top:
            return 64 * col + top.bit_length()
    return 0


def _pad_limbs(mags: np.ndarray, limbs: int) -> np.ndarray:
    have = mags.shape[1]
    if have == limbs:
        return mags
    if have > limbs:
        return np.ascontiguousarray(mags[:, :limbs])  # high limbs zero by bound
    out = np.zeros((mags.shape[0], limbs), dtype=np.uint64)
    out[:, :have] = mags
    return out


def _trim_limbs(mags: np.ndarray) -> np.ndarray:
    cols = mags.shape[1]
    while cols > 1 and not mags[:, cols - 1].any():
        cols -= 1
    return np.ascontiguousarray(mags[:, :cols])


def from_polynomial(p: Polynomial) -> tuple[ArrayPoly, Fraction]:
    """Engine form plus the rational scale (polynomial = scale * content)."""
    if p.is_zero():
        return zero_array(p.nvars), Fraction(1)
    items = list(p.terms.items())
    if p.field is QQ:
        den = 1
        for _, c in items:
            den = lcm(den, c.denominator)
        values = [int(c * den) for _, c in items]
        scale = Fraction(1, den)
    else:
        values = [int(c) for _, c in items]
        scale = Fraction(1)
    exps = np.array([e for e, _ in items], dtype=np.int64).reshape(len(items), p.nvars)
    mags, negs = _ints_to_limbs(values)
    return ArrayPoly(p.nvars, exps, mags, negs), scale


def to_polynomial(ap: ArrayPoly, field, scale: Fraction = Fraction(1)) -> Polynomial:
    values = _limbs_to_ints(ap.mags, ap.negs)
    if field is QQ:
        terms = {tuple(map(int, e)): Fraction(v) * scale for e, v in zip(ap.exps, values)}
    else:
        terms = {tuple(map(int, e)): v % field.p for e, v in zip(ap.exps, values)}
    return Polynomial(field, ap.nvars, terms)


def _modulus_of(field):
    return field.p if isinstance(field, PrimeField) else None


# ---------------------------------------------------------------------------
# small products and sums: plain dicts over Python ints

def _to_int_dict(ap: ArrayPoly) -> dict:
    return dict(zip(map(tuple, ap.exps.tolist()), _limbs_to_ints(ap.mags, ap.negs)))


def _from_int_dict(nvars: int, terms: dict) -> ArrayPoly:
    if not terms:
        return zero_array(nvars)
    check_terms(len(terms))
    exps = np.array(list(terms.keys()), dtype=np.int64).reshape(len(terms), nvars)
    mags, negs = _ints_to_limbs(list(terms.values()))
    return ArrayPoly(nvars, exps, mags, negs)


def _mul_small(a: ArrayPoly, b: ArrayPoly, modulus) -> ArrayPoly:
    da, db = _to_int_dict(a), _to_int_dict(b)
    if len(da) < len(db):
        da, db = db, da
    out: dict = {}
    for eb, cb in db.items():
        for ea, ca in da.items():
            key = tuple(x + y for x, y in zip(ea, eb))
            v = out.get(key, 0) + ca * cb
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    if modulus is not None:
        out = {e: c % modulus for e, c in out.items() if c % modulus}
    return _from_int_dict(a.nvars, out)


# ---------------------------------------------------------------------------
# packed path

@dataclass
class _Geometry:
    nvars: int
    packed: list            # variable indices flattened into slots, msb first
    grouped: list           # variable indices carried as sparse group keys
    dropped: int | None     # homogeneous-tuple shortcut variable
    result_degree: int | None
    strides: np.ndarray     # int64 per packed var (mixed radix)
    gstrides: np.ndarray    # int64 per grouped var
    slot_limbs: int
    modulus: int | None


def _make_geometry(a: ArrayPoly, b: ArrayPoly, field, addend) -> _Geometry:
    nvars = a.nvars
    overlap = min(len(a), len(b))
    slot_bits = _max_coeff_bits(a) + _max_coeff_bits(b) + overlap.bit_length() + 1
    if addend is not None:
        slot_bits = max(slot_bits, _max_coeff_bits(addend) + 2)
    slot_limbs = (slot_bits + 63) // 64

    ranges = a.max_ranges() + b.max_ranges()
    dropped = result_degree = None
    if a.is_homogeneous() and b.is_homogeneous():
        deg = a.degree() + b.degree()
        if addend is None or (addend.is_homogeneous() and addend.degree() == deg):
            result_degree = deg
            dropped = int(np.argmax(ranges))
    if addend is not None:
        ranges = np.maximum(ranges, addend.max_ranges())

    order = sorted(
        (v for v in range(nvars) if v != dropped),
        key=lambda v: int(ranges[v]),
        reverse=True,
    )
    packed: list = []
    span = 1
    top = int(ranges[order[0]]) if order else 0
    for v in order:
        r = int(ranges[v])
        if packed and r * PACK_RANGE_FRACTION < top:
            break
        trial = span * (r + 1)
        if trial > SLOT_CAP or trial * slot_limbs * 8 > BUF_CAP:
            break
        packed.append(v)
        span = trial
    grouped = [v for v in order if v not in packed]
    key_space = 1
    for v in grouped:
        key_space *= int(ranges[v]) + 1
    if key_space >= KEY_SPACE_CAP:
        raise ValueError("exponent ranges too large to key")

    strides = np.ones(max(len(packed), 1), dtype=np.int64)[: len(packed)]
    for i in range(len(packed) - 2, -1, -1):
        strides[i] = strides[i + 1] * (int(ranges[packed[i + 1]]) + 1)
    gstrides = np.ones(max(len(grouped), 1), dtype=np.int64)[: len(grouped)]
    for i in range(len(grouped) - 2, -1, -1):
        gstrides[i] = gstrides[i + 1] * (int(ranges[grouped[i + 1]]) + 1)
    return _Geometry(
        nvars=nvars,
        packed=packed,
        grouped=grouped,
        dropped=dropped,
        result_degree=result_degree,
        strides=strides,
        gstrides=gstrides,
        slot_limbs=slot_limbs,
        modulus=_modulus_of(field),
    )


def _keys_and_slots(ap: ArrayPoly, geo: _Geometry):
    if geo.packed:
        slots = ap.exps[:, geo.packed] @ geo.strides
    else:
        slots = np.zeros(len(ap), dtype=np.int64)
    if geo.grouped:
        keys = ap.exps[:, geo.grouped] @ geo.gstrides
    else:
        keys = np.zeros(len(ap), dtype=np.int64)
    return keys, slots


def _operand_layout(ap: ArrayPoly, geo: _Geometry):
    """Sort an operand into key groups; report slot windows and offset gcd."""
    keys, slots = _keys_and_slots(ap, geo)
    order = np.lexsort((slots, keys))
    keys = keys[order]
    slots = slots[order]
    starts = np.nonzero(np.r_[True, keys[1:] != keys[:-1]])[0]
    ends = np.r_[starts[1:], keys.size]
    stride = 0
    groups = []
    for s, e in zip(starts.tolist(), ends.tolist()):
        win = slots[s:e]
        base = int(win[0])
        if e - s > 1:
            g = int(np.gcd.reduce(np.diff(win)))
            stride = g if stride == 0 else gcd(stride, g)
        groups.append((int(keys[s]), base, s, e))
    return order, slots, groups, stride


def _pack_payloads(ap: ArrayPoly, geo: _Geometry, layout, stride: int) -> dict:
    """{(key, is_neg): (base, nslots, flat uint64 payload at slot width)}."""
    order, slots, groups, _ = layout
    W = geo.slot_limbs
    mags = _pad_limbs(ap.mags, W)[order]
    negs = ap.negs[order]
    out = {}
    for key, base, s, e in groups:
        rel = (slots[s:e] - base) // stride
        nslots = int(rel[-1]) + 1
        gm = mags[s:e]
        gn = negs[s:e]
        for want_neg in (False, True):
            sel = np.nonzero(gn == want_neg)[0]
            if sel.size == 0:
                continue
            buf = np.zeros((nslots, W), dtype=np.uint64)
            buf[rel[sel]] = gm[sel]
            out[(key, want_neg)] = (base, nslots, buf.reshape(-1))
    return out


def _pack_terms(ap: ArrayPoly, geo: _Geometry, layout, stride: int) -> dict:
    """{key: (base, rel slots, nonzero (term, digit, limb) triples, negs)}."""
    order, slots, groups, _ = layout
    mags = ap.mags[order]
    negs = ap.negs[order]
    out = {}
    for key, base, s, e in groups:
        rel = ((slots[s:e] - base) // stride).tolist()
        gm = mags[s:e]
        gn = negs[s:e].tolist()
        ti, di = np.nonzero(gm)
        triples = [
            (rel[t], int(d), int(gm[t, d]), gn[t]) for t, d in zip(ti.tolist(), di.tolist())
        ]
        out[key] = (base, int(rel[-1]), triples)
    return out


def _multiword_sub(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """a - b on (N, L) uint64 rows; returns (difference, wrapped_rows_mask)."""
    out = np.empty_like(a)
    borrow = np.zeros(a.shape[0], dtype=np.uint64)
    for j in range(a.shape[1]):
        t = a[:, j] - borrow
        b1 = a[:, j] < borrow
        d = t - b[:, j]
        b2 = t < b[:, j]
        out[:, j] = d
        borrow = (b1 | b2).astype(np.uint64)
    return out, borrow.astype(bool)


def _combine_signed(pos: np.ndarray, neg: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Row-wise pos - neg as (magnitude, is_negative)."""
    diff, wrapped = _multiword_sub(pos, neg)
    if wrapped.any():
        idx = np.nonzero(wrapped)[0]
        diff[idx], again = _multiword_sub(neg[idx], pos[idx])
        assert not again.any()
    return diff, wrapped


def _flat_int_add(seg: np.ndarray, rows: np.ndarray) -> None:
    """seg += rows as little-endian integers; carries stay inside the slot
    tops by the slot-width bound, so the ripple loop is short."""
    t = seg + rows
    carry_at = np.nonzero(t < rows)[0] + 1
    seg[:] = t
    while carry_at.size:
        t2 = seg[carry_at] + np.uint64(1)
        seg[carry_at] = t2
        carry_at = carry_at[t2 == 0] + 1


class _ClassAcc:
    """Accumulation state for one (group key, base residue) result class."""

    __slots__ = ("minbase", "span", "pairs", "addend_lo", "addend_hi")

    def __init__(self):
        self.minbase = None
        self.span = 0
        self.pairs = []
        self.addend_lo = None
        self.addend_hi = None


def _kronecker_mul(a: ArrayPoly, b: ArrayPoly, field, addend) -> ArrayPoly:
    if len(a) < len(b):
        a, b = b, a
    geo = _make_geometry(a, b, field, addend)
    lay_a = _operand_layout(a, geo)
    lay_b = _operand_layout(b, geo)
    stride = gcd(lay_a[3], lay_b[3])
    if stride == 0:
        stride = 1
    W = geo.slot_limbs
    packs_a = _pack_payloads(a, geo, lay_a, stride)
    term_mode = _ADDMUL1 is not None and len(b) <= TERM_LOOP_CAP
    if term_mode:
        bitems = list(_pack_terms(b, geo, lay_b, stride).items())
    else:
        bitems = [
            (kn, (base, nslots, _mpz_from_payload(flat.tobytes())))
            for kn, (base, nslots, flat) in _pack_payloads(b, geo, lay_b, stride).items()
        ]

    classes: dict = {}

    def cls_for(key, base):
        ck = (key, base % stride)
        got = classes.get(ck)
        if got is None:
            got = classes[ck] = _ClassAcc()
        if got.minbase is None or base < got.minbase:
            got.minbase = base
        return got

    for (ka, na), (ba, nsa, flat_a) in packs_a.items():
        if term_mode:
            for kb, (bb, relmax, triples) in bitems:
                c = cls_for(ka + kb, ba + bb)
                c.pairs.append((ba + bb, nsa, flat_a, na, relmax, triples))
        else:
            for (kb, nb), (bb, nsb, mb) in bitems:
                c = cls_for(ka + kb, ba + bb)
                c.pairs.append((ba + bb, nsa, flat_a, na ^ nb, nsb, mb))

    # fold the addend rows in: per row, class membership and slot offset
    addend_rows = None
    if addend is not None and not addend.is_zero():
        akeys, aslots = _keys_and_slots(addend, geo)
        aresid = aslots % stride
        amags = _pad_limbs(addend.mags, W)
        order = np.lexsort((aslots, aresid, akeys))
        akeys, aslots, aresid = akeys[order], aslots[order], aresid[order]
        amags = amags[order]
        anegs = addend.negs[order]
        bounds = np.nonzero(
            np.r_[True, (akeys[1:] != akeys[:-1]) | (aresid[1:] != aresid[:-1])]
        )[0]
        bounds = np.r_[bounds, akeys.size]
        addend_rows = []
        for s, e in zip(bounds[:-1].tolist(), bounds[1:].tolist()):
            c = cls_for(int(akeys[s]), int(aslots[s]))
            lo = int(aslots[s])
            if lo < c.minbase:
                c.minbase = lo
            c.addend_lo = len(addend_rows)
            addend_rows.append((c, aslots[s:e], amags[s:e], anegs[s:e]))

    work = 0
    for c in classes.values():
        for p in c.pairs:
            if term_mode:
                work += len(p[5]) * p[1] * W
            else:
                work += (p[1] + p[4]) * W + PAIR_OVERHEAD_LIMBS
    scale = current_budget() / DEFAULT_TERM_BUDGET
    cap = int((TERM_WORK_CAP if term_mode else BIG_WORK_CAP) * scale)
    if work > cap:
        raise BudgetExceeded(work, cap, "limb operations of multiplication work")

    result_rows = []
    total = 0
    mask64 = _MASK64
    addmul = _ADDMUL1
    for ck in sorted(classes):
        c = classes[ck]
        minbase = c.minbase
        span = 0
        for p in c.pairs:
            if term_mode:
                ext = (p[0] - minbase) // stride + p[1] + p[4] + 2
            else:
                ext = (p[0] - minbase) // stride + p[1] + p[4] + 1
            span = max(span, ext)
        rows_here = None
        if c.addend_lo is not None:
            rows_here = addend_rows[c.addend_lo]
            offs = (rows_here[1] - minbase) // stride
            span = max(span, int(offs.max()) + 1)
        bufs = [None, None]

        def get_buf(neg):
            if bufs[neg] is None:
                bufs[neg] = np.zeros(span * W + W + 4, dtype=np.uint64)
            return bufs[neg]

        if rows_here is not None:
            _, rslots, rmags, rnegs = rows_here
            offs = ((rslots - minbase) // stride).astype(np.int64)
            for neg in (False, True):
                sel = np.nonzero(rnegs == neg)[0]
                if sel.size == 0:
                    continue
                buf = get_buf(neg)
                idx = (offs[sel, None] * W + np.arange(W)[None, :]).reshape(-1)
                buf[idx] = rmags[sel].reshape(-1)

        for p in c.pairs:
            off0 = (p[0] - minbase) // stride
            if term_mode:
                base, nsa, flat_a, na, relmax, triples = p
                aptr = flat_a.ctypes.data
                nl = nsa * W
                for rel, d, limb, tneg in triples:
                    buf = get_buf(na ^ tneg)
                    pos = (off0 + rel) * W + d
                    carry = addmul(buf.ctypes.data + pos * 8, aptr, nl, limb)
                    if carry:
                        i = pos + nl
                        while carry:
                            s = int(buf[i]) + carry
                            buf[i] = s & mask64
                            carry = s >> 64
                            i += 1
            else:
                base, nsa, flat_a, neg, nsb, mb = p
                ma = _mpz_from_payload(flat_a.tobytes())
                prod = ma * mb
                bl = prod.bit_length()
                if bl == 0:
                    continue
                nrows = (bl + 64 * W - 1) // (64 * W)
                payload = _payload_of(prod, nrows * W * 8)
                rows = np.frombuffer(payload, dtype=np.uint64)
                buf = get_buf(neg)
                _flat_int_add(buf[off0 * W : off0 * W + nrows * W], rows)

        got = _extract_class(ck, c, bufs, span, stride, geo)
        if got is not None:
            result_rows.append(got)
            total += got[0].shape[0]
            check_terms(total)

    if not result_rows:
        return zero_array(geo.nvars)
    limbs = max(m.shape[1] for _, m, _ in result_rows)
    ap = ArrayPoly(
        geo.nvars,
        np.vstack([e for e, _, _ in result_rows]),
        _trim_limbs(np.vstack([_pad_limbs(m, limbs) for _, m, _ in result_rows])),
        np.concatenate([n for _, _, n in result_rows]),
    )
    if geo.modulus is not None:
        ap = _reduce_mod(ap, geo.modulus)
    return ap


def _extract_class(ck, c, bufs, span, stride, geo):
    W = geo.slot_limbs
    pr = bufs[0][: span * W].reshape(span, W) if bufs[0] is not None else None
    nr = bufs[1][: span * W].reshape(span, W) if bufs[1] is not None else None
    if pr is None and nr is None:
        return None
    if nr is None:
        mask = pr.any(axis=1)
        idx = np.nonzero(mask)[0]
        mags = pr[idx]
        negs = np.zeros(idx.size, dtype=bool)
    elif pr is None:
        mask = nr.any(axis=1)
        idx = np.nonzero(mask)[0]
        mags = nr[idx]
        negs = np.ones(idx.size, dtype=bool)
    else:
        mask = pr.any(axis=1) | nr.any(axis=1)
        idx = np.nonzero(mask)[0]
        mags, negs = _combine_signed(pr[idx], nr[idx])
        live = mags.any(axis=1)  # exact cancellations vanish
        idx, mags, negs = idx[live], mags[live], negs[live]
    if idx.size == 0:
        return None

    slots = c.minbase + idx.astype(np.int64) * stride
    exps = np.zeros((idx.size, geo.nvars), dtype=np.int64)
    rem = slots
    for v, st in zip(geo.packed, geo.strides):
        exps[:, v] = rem // st
        rem = rem % st
    gk = ck[0]
    for v, st in zip(geo.grouped, geo.gstrides):
        exps[:, v] = gk // int(st)
        gk %= int(st)
    if geo.dropped is not None:
        fill = geo.result_degree - exps.sum(axis=1)
        if fill.size and int(fill.min()) < 0:
            raise AssertionError("homogeneous degree bookkeeping broke")
        exps[:, geo.dropped] = fill
    return exps, np.ascontiguousarray(mags), negs


def _reduce_mod(ap: ArrayPoly, p: int) -> ArrayPoly:
    if ap.is_zero():
        return ap
    if ap.mags.shape[1] == 1 and p < (1 << 63):
        vals = ap.mags[:, 0] % np.uint64(p)
        vals = np.where(ap.negs & (vals != 0), np.uint64(p) - vals, vals)
        keep = vals != 0
        if not keep.any():
            return zero_array(ap.nvars)
        return ArrayPoly(
            ap.nvars,
            ap.exps[keep],
            np.ascontiguousarray(vals[keep]).reshape(-1, 1),
            np.zeros(int(keep.sum()), dtype=bool),
        )
    values = [v % p for v in _limbs_to_ints(ap.mags, ap.negs)]
    keep = [i for i, v in enumerate(values) if v]
    if not keep:
        return zero_array(ap.nvars)
    mags, negs = _ints_to_limbs([values[i] for i in keep])
    return ArrayPoly(ap.nvars, ap.exps[keep], mags, negs)


# ---------------------------------------------------------------------------
# public operations

def _mul_monomial(a: ArrayPoly, mono: ArrayPoly, field) -> ArrayPoly:
    """a times a single-term polynomial: exponent shift plus coefficient scale."""
    (coeff,) = _limbs_to_ints(mono.mags, mono.negs)
    scaled = scale_array(a, coeff, field)
    if scaled.is_zero():
        return scaled
    exps = scaled.exps + mono.exps[0]
    return ArrayPoly(a.nvars, exps, scaled.mags, scaled.negs)


def mul_arrays(a: ArrayPoly, b: ArrayPoly, field, addend: ArrayPoly | None = None) -> ArrayPoly:
    """a*b (+ addend).  The addend rides inside the packed accumulation."""
    if a.nvars != b.nvars:
        raise ValueError("arity mismatch")
    if addend is not None and addend.is_zero():
        addend = None
    if a.is_zero() or b.is_zero():
        return addend if addend is not None else zero_array(a.nvars)
    if len(b) == 1 or len(a) == 1:
        prod = _mul_monomial(a, b, field) if len(b) == 1 else _mul_monomial(b, a, field)
        return prod if addend is None else add_arrays(prod, addend, field)
    if len(a) * len(b) <= SMALL_PAIR_LIMIT:
        prod = _mul_small(a, b, _modulus_of(field))
        return prod if addend is None else add_arrays(prod, addend, field)
    return _kronecker_mul(a, b, field, addend)


def poly_mul_large(pa: Polynomial, pb: Polynomial) -> Polynomial:
    """Backend for Polynomial.__mul__ above the dict-path cutoff."""
    a, sa = from_polynomial(pa)
    b, sb = from_polynomial(pb)
    return to_polynomial(mul_arrays(a, b, pa.field), pa.field, sa * sb)


def scale_array(ap: ArrayPoly, w: int, field) -> ArrayPoly:
    """Multiply every coefficient by the integer w."""
    mod = _modulus_of(field)
    if mod is not None:
        w %= mod
    if w == 0 or ap.is_zero():
        return zero_array(ap.nvars)
    if w == 1:
        return ap
    negs = ap.negs if w > 0 else ~ap.negs
    aw = abs(w)
    if aw == 1:
        out_ap = ArrayPoly(ap.nvars, ap.exps, ap.mags, negs)
        return _reduce_mod(out_ap, mod) if mod is not None else out_ap
    # multiword-by-scalar in base 2^32 digit columns
    T, L = ap.mags.shape
    wdigits = (aw.bit_length() + 31) // 32
    width = 2 * L + wdigits + 1
    if width % 2:
        width += 1
    dig = np.zeros((T, width), dtype=np.uint64)
    dig[:, 0 : 2 * L : 2] = ap.mags & _MASK32
    dig[:, 1 : 2 * L : 2] = ap.mags >> np.uint64(32)
    out = np.zeros_like(dig)
    off = 0
    while aw:
        wv = np.uint64(aw & 0xFFFFFFFF)
        aw >>= 32
        if wv:
            carry = np.zeros(T, dtype=np.uint64)
            for k in range(2 * L):
                t = dig[:, k] * wv + carry
                col = out[:, k + off] + (t & _MASK32)
                out[:, k + off] = col & _MASK32
                carry = (t >> np.uint64(32)) + (col >> np.uint64(32))
            k = 2 * L + off
            while carry.any():  # ripples at most into the headroom digits
                col = out[:, k] + carry
                out[:, k] = col & _MASK32
                carry = col >> np.uint64(32)
                k += 1
        off += 1
    mags = out[:, 0::2] | (out[:, 1::2] << np.uint64(32))
    out_ap = ArrayPoly(ap.nvars, ap.exps, _trim_limbs(mags), negs)
    return _reduce_mod(out_ap, mod) if mod is not None else out_ap


def _full_keys(exps: np.ndarray, ranges: np.ndarray) -> np.ndarray | None:
    """Pack whole exponent rows into int64 keys; None if the range overflows."""
    span = 1
    strides = np.ones(exps.shape[1], dtype=np.int64)
    for i in range(exps.shape[1] - 1, -1, -1):
        strides[i] = span
        span *= int(ranges[i]) + 1
        if span >= KEY_SPACE_CAP:
            return None
    return exps @ strides


def add_arrays(a: ArrayPoly, b: ArrayPoly, field) -> ArrayPoly:
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    if a.nvars != b.nvars:
        raise ValueError("arity mismatch")
    mod = _modulus_of(field)
    if len(a) + len(b) <= 4096:
        out = _to_int_dict(a)
        for e, c in _to_int_dict(b).items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                del out[e]
        if mod is not None:
            out = {e: c % mod for e, c in out.items() if c % mod}
        return _from_int_dict(a.nvars, out)

    limbs = max(a.mags.shape[1], b.mags.shape[1]) + 1  # headroom for carries
    exps = np.vstack([a.exps, b.exps])
    mags = np.vstack([_pad_limbs(a.mags, limbs), _pad_limbs(b.mags, limbs)])
    negs = np.concatenate([a.negs, b.negs])
    keys = _full_keys(exps, exps.max(axis=0))
    if keys is None:
        order = np.lexsort(exps.T)
        se = exps[order]
        same = np.r_[False, (se[1:] == se[:-1]).all(axis=1)]
    else:
        order = np.argsort(keys, kind="stable")
        sk = keys[order]
        same = np.r_[False, sk[1:] == sk[:-1]]
    exps, mags, negs = exps[order], mags[order], negs[order]
    # inputs each have distinct rows, so duplicate runs have length exactly 2
    dup2 = np.nonzero(same)[0]
    if dup2.size:
        first = dup2 - 1
        fa, fb = mags[first], mags[dup2]
        na, nb = negs[first], negs[dup2]
        res_m = np.zeros_like(fa)
        res_n = np.zeros(dup2.size, dtype=bool)
        same_sign = na == nb
        if same_sign.any():
            i = np.nonzero(same_sign)[0]
            s = fa[i].copy()
            carry = np.zeros(i.size, dtype=np.uint64)
            for j in range(s.shape[1]):
                t = s[:, j] + carry
                c1 = t < carry
                t2 = t + fb[i][:, j]
                c2 = t2 < t
                s[:, j] = t2
                carry = (c1 | c2).astype(np.uint64)
            assert not carry.any()  # headroom limb above
            res_m[i] = s
            res_n[i] = na[i]
        diff_i = np.nonzero(~same_sign)[0]
        if diff_i.size:
            d, wrapped = _combine_signed(fa[diff_i], fb[diff_i])
            res_m[diff_i] = d
            res_n[diff_i] = np.where(wrapped, nb[diff_i], na[diff_i])
        keep = np.ones(exps.shape[0], dtype=bool)
        keep[dup2] = False
        mags[first] = res_m
        negs[first] = res_n
        live = res_m.any(axis=1)
        keep[first[~live]] = False
        exps, mags, negs = exps[keep], mags[keep], negs[keep]
    check_terms(exps.shape[0])
    if exps.shape[0] == 0:
        return zero_array(a.nvars)
    ap = ArrayPoly(a.nvars, np.ascontiguousarray(exps), _trim_limbs(mags), negs)
    if mod is not None:
        ap = _reduce_mod(ap, mod)
    return ap


# ---------------------------------------------------------------------------
# composition: evaluate integer-weighted components at engine polynomials

def eval_component(
    terms: list,
    args: list,
    field,
    cache: dict | None = None,
) -> ArrayPoly:
    """Evaluate sum(w * prod(args[j] ** e_j)) for (e, w) in terms.

    Recursive Horner: strip the common monomial factor, split on the best
    variable v as C0 + x_v^k * R, and fold C0 into the packed multiply as an
    addend.  Sub-evaluations are memoized by their term sets, so components
    that share tails (triangular maps do, pervasively) reuse each other's
    work.  `terms` must carry tuple exponents, distinct rows, and integer
    weights.  Pass one `cache` dict per composition step to share powers,
    products and sub-results across components.
    """
    if not args:
        raise ValueError("eval_component needs at least one argument")
    nvars = args[0].nvars
    if cache is None:
        cache = {}
    # products are memoized only between long-lived operands (arguments,
    # their powers, memoized sub-results); throwaway accumulators never recur
    stable = cache.setdefault("stable", {id(a) for a in args})

    def cached_mul(x: ArrayPoly, y: ArrayPoly) -> ArrayPoly:
        if (
            min(len(x), len(y)) <= 1
            or len(x) * len(y) <= SMALL_PAIR_LIMIT
            or id(x) not in stable
            or id(y) not in stable
        ):
            return mul_arrays(x, y, field)
        key = (id(x), id(y)) if id(x) <= id(y) else (id(y), id(x))
        got = cache.get(key)
        if got is not None and ((got[0] is x and got[1] is y) or (got[0] is y and got[1] is x)):
            return got[2]
        res = mul_arrays(x, y, field)
        cache[key] = (x, y, res)
        return res

    def power(j: int, k: int) -> ArrayPoly:
        if k == 1:
            return args[j]
        got = cache.get(("pow", j, k))
        if got is None:
            half = power(j, k // 2)
            got = cached_mul(half, half)
            if k % 2:
                got = cached_mul(got, args[j])
            cache[("pow", j, k)] = got
            stable.add(id(got))
        return got

    def monomial(e: tuple, w: int) -> ArrayPoly:
        factors = sorted((power(j, k) for j, k in enumerate(e) if k), key=len)
        if not factors:
            return scale_array(const_array(nvars, 1), w, field)
        acc = factors[0]
        for f in factors[1:]:
            acc = cached_mul(acc, f)
        return scale_array(acc, w, field)

    def eval_items(items: list) -> ArrayPoly:
        if not items:
            return zero_array(nvars)
        if len(items) == 1:
            return monomial(*items[0])
        memo_key = ("terms", frozenset(items))
        got = cache.get(memo_key)
        if got is not None:
            return got
        mins = tuple(min(e[j] for e, _ in items) for j in range(len(items[0][0])))
        if any(mins):
            stripped = [
                (tuple(x - m for x, m in zip(e, mins)), w) for e, w in items
            ]
            res = mul_arrays(eval_items(stripped), monomial(mins, 1), field)
        else:
            # split on the non-monomial argument with the highest exponent:
            # monomial arguments multiply for free, so structuring the
            # recursion around them would waste the reuse on cheap factors
            best_v, best_key = 0, (-1, -1, -1)
            for e, _ in items:
                for j, k in enumerate(e):
                    cand = (0 if args[j].is_monomial() else 1, k, len(args[j]))
                    if k and cand > best_key:
                        best_v, best_key = j, cand
            c0 = [(e, w) for e, w in items if e[best_v] == 0]
            rest = [(e, w) for e, w in items if e[best_v] > 0]
            k = min(e[best_v] for e, _ in rest)
            rest = [
                (e[:best_v] + (e[best_v] - k,) + e[best_v + 1 :], w) for e, w in rest
            ]
            res = mul_arrays(
                power(best_v, k), eval_items(rest), field, addend=eval_items(c0)
            )
        cache[memo_key] = res
        stable.add(id(res))
        return res

    return eval_items([(e, w) for e, w in terms if w])
