"""Secure coding layer: mixing basis selection, source encoding, sink decoding.

A secure bundle wraps a base code of dimension n = C_min with an invertible
mixing matrix Q whose leading n - r columns avoid every wiretappable kernel
span.  The source input is the row vector X = [message, constant, key]; the
constant block is all zeros and pads any message rate up to the capacity.
Channel e carries X Q^{-1} f_e.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

from .errors import (
    DimensionMismatch,
    FieldTooSmall,
    InconsistentObservation,
    ParseError,
    RateTooHigh,
    SecurityLevelTooLarge,
    Singular,
    UnknownSink,
)
from .field import (
    FieldSpec,
    Matrix,
    dot,
    solve_unique,
    spans_intersect_trivially,
    vector_from_index,
)
from .lnc import (
    GlobalCode,
    _parse_header,
    code_body_lines,
    construct_lnc,
    enumerate_code_wiretap_sets,
    imaginary_ids,
    parse_code_lines,
)
from .network import Network, c_min, parse_network, serialize_network


@dataclass(eq=False)
class SecureCodeBundle:
    """A base code plus mixing matrix and rate bookkeeping.

    key_dim = r - i uniform key symbols; the key rate equals key_dim exactly.
    basis_level records the level at which the span-avoidance condition was
    built: it equals r whenever omega + r fits the dimension, and drops to
    r - i otherwise, in which case the security claim rests on verification
    rather than on the construction.
    """

    base: GlobalCode
    mixing: Matrix
    omega: int
    r: int
    i: int
    key_dim: int
    constant: tuple[int, ...]
    basis_level: int

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def field(self) -> FieldSpec:
        return self.base.field

    @property
    def network(self) -> Network:
        return self.base.network

    @property
    def key_rate(self) -> int:
        return self.key_dim

    @property
    def constructively_certified(self) -> bool:
        return self.basis_level == self.r

    @cached_property
    def mixing_inv(self) -> Matrix:
        return self.mixing.inverse()


def choose_secure_basis(code: GlobalCode, r: int) -> Matrix:
    """Greedy deterministic choice of the mixing matrix Q.

    Vectors of GF(q)^n are scanned in base-q integer order (first coordinate
    least significant).  Each of the first n - r columns is the smallest
    vector that keeps the prefix independent and its span disjoint from
    every wiretappable kernel span; the remaining columns just extend
    independence.  Raises FieldTooSmall if a column scan exhausts the field.
    """
    n = code.n
    field = code.field
    if not 1 <= r < n:
        raise SecurityLevelTooLarge(f"need 1 <= r < n = {n}, got {r}")
    wiretap_mats = [
        code.kernel_matrix(A) for A in enumerate_code_wiretap_sets(code, r).sets
    ]
    cols: list[tuple[int, ...]] = []
    for j in range(1, n + 1):
        found = None
        for index in range(1, field.q ** n):
            vec = vector_from_index(field, index, n)
            prefix = Matrix.from_cols(field, cols + [vec], rows=n)
            if prefix.rank() != j:
                continue
            if j <= n - r and not all(
                spans_intersect_trivially(prefix, fa) for fa in wiretap_mats
            ):
                continue
            found = vec
            break
        if found is None:
            raise FieldTooSmall(
                f"no column {j} of {n} exists over GF({field.q}); retry with a larger field"
            )
        cols.append(found)
    return Matrix.from_cols(field, cols, rows=n)


def build_secure_bundle(net: Network, omega: int, r: int, i: int = 0) -> SecureCodeBundle:
    """Run the full pipeline: base code, mixing basis, rate bookkeeping.

    Accepts any omega >= 1 with omega + (r - i) <= C_min; the constant block
    absorbs the slack so the key stays at exactly r - i symbols.  When
    omega + r exceeds the dimension (possible only for i > 0), the basis is
    built at level r - i and the bundle is flagged as not constructively
    certified.
    """
    if omega < 1:
        raise RateTooHigh(f"information rate must be at least 1, got {omega}")
    if r < 1:
        raise SecurityLevelTooLarge(f"security level must be at least 1, got {r}")
    if not 0 <= i <= r:
        raise SecurityLevelTooLarge(f"imperfect level must satisfy 0 <= i <= r, got {i}")
    n = c_min(net)
    if r >= n:
        raise SecurityLevelTooLarge(f"security level {r} must be below C_min = {n}")
    key_dim = r - i
    if omega + key_dim > n:
        raise RateTooHigh(
            f"omega + key_dim = {omega + key_dim} exceeds C_min = {n}"
        )
    base = construct_lnc(net, n)
    basis_level = r if omega + r <= n else key_dim
    if basis_level >= 1:
        mixing = choose_secure_basis(base, basis_level)
    else:
        # i = r leaves no wiretap constraint to build against (key_dim = 0);
        # the independence-only greedy degenerates to the standard basis.
        mixing = Matrix.identity(net.field, n)
    constant = (0,) * (n - omega - key_dim)
    return SecureCodeBundle(
        base=base,
        mixing=mixing,
        omega=omega,
        r=r,
        i=i,
        key_dim=key_dim,
        constant=constant,
        basis_level=basis_level,
    )


def _check_block(field: FieldSpec, name: str, values: Sequence[int], length: int) -> tuple[int, ...]:
    if len(values) != length:
        raise DimensionMismatch(f"{name} must have {length} symbols, got {len(values)}")
    return tuple(field.check(v) for v in values)


def encode_source(
    bundle: SecureCodeBundle, message: Sequence[int], key: Sequence[int]
) -> dict[str, int]:
    """Per-channel symbols X Q^{-1} f_e for the input X = [message, constant, key].

    Also re-derives every symbol by local propagation (imaginary channels
    carry the coordinates of X Q^{-1}, each edge combines its inputs with
    the local coefficients) and asserts both routes agree.
    """
    field = bundle.field
    m = _check_block(field, "message", message, bundle.omega)
    k = _check_block(field, "key", key, bundle.key_dim)
    x = m + bundle.constant + k
    inv = bundle.mixing_inv
    w = tuple(dot(field, x, inv.col(j)) for j in range(bundle.n))
    code = bundle.base
    symbols = {e.id: dot(field, w, code.kernels[e.id]) for e in bundle.network.edges}

    carried: dict[str, int] = {d: w[j] for j, d in enumerate(imaginary_ids(bundle.n))}
    for edge in bundle.network.topo_edges():
        acc = 0
        for d in code.in_channel_ids(edge.tail):
            coeff = code.local_coeffs.get((d, edge.id), 0)
            if coeff:
                acc = field.add(acc, field.mul(coeff, carried[d]))
        carried[edge.id] = acc
        assert acc == symbols[edge.id], f"local propagation diverged on {edge.id}"
    return symbols


def decode_at_sink(
    bundle: SecureCodeBundle, t: str, observed: Mapping[str, int]
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Recover (message, key) from the symbols on a sink's incoming channels.

    Raises InconsistentObservation when the symbols fit no input or the
    recovered constant block differs from the bundle constant (corruption).
    """
    net = bundle.network
    if t not in net.sinks:
        raise UnknownSink(f"{t} is not a declared sink")
    in_ids = [e.id for e in net.in_edges(t)]
    missing = [eid for eid in in_ids if eid not in observed]
    if missing:
        raise DimensionMismatch(f"missing symbols for: {', '.join(missing)}")
    field = bundle.field
    y = [field.check(observed[eid]) for eid in in_ids]
    gain = bundle.mixing_inv @ bundle.base.kernel_matrix(in_ids)
    try:
        x = solve_unique(gain.transpose(), y)
    except Singular as exc:
        raise InconsistentObservation(f"sink {t} cannot isolate the input: {exc}") from exc
    if x is None:
        raise InconsistentObservation(f"symbols at sink {t} match no input")
    omega, const_len = bundle.omega, len(bundle.constant)
    m = x[:omega]
    c = x[omega:omega + const_len]
    k = x[omega + const_len:]
    if c != bundle.constant:
        raise InconsistentObservation(
            f"constant block mismatch at sink {t}: expected {bundle.constant}, got {c}"
        )
    return m, k


# -- text format -----------------------------------------------------------------

def write_bundle(bundle: SecureCodeBundle) -> str:
    """Self-contained bundle file: code header, rates, Q, constant, network, code body."""
    lines = [
        f"code n={bundle.n} q={bundle.field.q}",
        f"secure omega={bundle.omega} r={bundle.r} i={bundle.i} keydim={bundle.key_dim}",
        "Q",
    ]
    lines += bundle.mixing.serialize().splitlines()
    lines.append(("const " + " ".join(str(c) for c in bundle.constant)).rstrip())
    lines += serialize_network(bundle.network).splitlines()
    lines += code_body_lines(bundle.base)
    return "\n".join(lines) + "\n"


def parse_bundle(text: str) -> SecureCodeBundle:
    """Parse a bundle file written by write_bundle."""
    code_header: str | None = None
    secure_header: dict[str, int] | None = None
    q_rows: list[list[int]] | None = None
    constant: tuple[int, ...] | None = None
    net_lines: list[str] = []
    body_lines: list[str] = []

    lines = [raw.split("#", 1)[0].strip() for raw in text.splitlines()]
    lines = [ln for ln in lines if ln]
    pos = 0
    n = q = None
    while pos < len(lines):
        line = lines[pos]
        keyword = line.split()[0]
        if keyword == "code":
            if code_header is not None:
                raise ParseError("duplicate code header")
            code_header = line
            n, q = _parse_header(line)
        elif keyword == "secure":
            tokens = line.split()[1:]
            values: dict[str, int] = {}
            for tok in tokens:
                key, _, val = tok.partition("=")
                try:
                    values[key] = int(val)
                except ValueError:
                    raise ParseError(f"bad secure header token {tok!r}") from None
            if set(values) != {"omega", "r", "i", "keydim"}:
                raise ParseError(f"secure header needs omega=, r=, i=, keydim=: {line!r}")
            secure_header = values
        elif keyword == "Q":
            if n is None:
                raise ParseError("Q block must follow the code header")
            if pos + n >= len(lines):
                raise ParseError("Q block is truncated")
            q_rows = []
            for row_line in lines[pos + 1:pos + 1 + n]:
                try:
                    q_rows.append([int(x) for x in row_line.split()])
                except ValueError:
                    raise ParseError(f"bad Q row: {row_line!r}") from None
            pos += n
        elif keyword == "const":
            try:
                constant = tuple(int(x) for x in line.split()[1:])
            except ValueError:
                raise ParseError(f"bad const line: {line!r}") from None
        elif keyword in ("field", "source", "sink", "edge"):
            net_lines.append(line)
        elif keyword in ("kernel", "local"):
            body_lines.append(line)
        else:
            raise ParseError(f"unexpected line in bundle: {line!r}")
        pos += 1

    if code_header is None or n is None or q is None:
        raise ParseError("missing code header")
    if secure_header is None:
        raise ParseError("missing secure header")
    if q_rows is None:
        raise ParseError("missing Q block")
    if constant is None:
        raise ParseError("missing const line")
    net = parse_network("\n".join(net_lines) + "\n")
    base = parse_code_lines(net, n, q, body_lines)
    field = net.field
    if any(len(row) != n for row in q_rows):
        raise ParseError("Q rows must all have n entries")
    mixing = Matrix.from_rows(field, q_rows, cols=n)
    try:
        mixing.inverse()
    except Singular:
        raise ParseError("Q is not invertible") from None
    omega = secure_header["omega"]
    r = secure_header["r"]
    i = secure_header["i"]
    key_dim = secure_header["keydim"]
    if key_dim != r - i:
        raise ParseError(f"keydim={key_dim} is inconsistent with r={r}, i={i}")
    if not (omega >= 1 and r >= 1 and 0 <= i <= r and omega + key_dim <= n):
        raise ParseError("secure header rates are out of range")
    if len(constant) != n - omega - key_dim:
        raise ParseError(
            f"constant block must have {n - omega - key_dim} symbols, got {len(constant)}"
        )
    constant = tuple(field.check(c) for c in constant)
    basis_level = r if omega + r <= n else key_dim
    return SecureCodeBundle(
        base=base,
        mixing=mixing,
        omega=omega,
        r=r,
        i=i,
        key_dim=key_dim,
        constant=constant,
        basis_level=basis_level,
    )
