"""Linear network codes: global kernels, local coefficients, and their checks.

The construction follows the deterministic flow-path method: fix edge-disjoint
source-to-sink paths per sink, walk edges in topological order, and give each
coded edge the lexicographically smallest local-coefficient assignment that
keeps every sink's frontier kernels at full rank.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field

from .errors import (
    DimensionExceedsCapacity,
    FieldTooSmallForSinks,
    ParseError,
    SecurityLevelTooLarge,
)
from .field import FieldSpec, Matrix, rank_of_rows, vec_add, vec_scale
from .network import Network, WiretapCollection, c_min, edge_disjoint_paths, enumerate_topology_wiretap_sets

IMAGINARY_PREFIX = "__s_"


def imaginary_ids(n: int) -> list[str]:
    """Ids of the n imaginary source-input channels (never serialized)."""
    return [f"{IMAGINARY_PREFIX}{j + 1}" for j in range(n)]


def standard_basis(n: int, j: int) -> tuple[int, ...]:
    return tuple(1 if i == j else 0 for i in range(n))


@dataclass(eq=False)
class GlobalCode:
    """An n-dimensional linear code: kernel f_e per channel plus local coefficients.

    Kernels of the imaginary input channels are the standard basis and are
    kept implicit; `kernel` resolves both real and imaginary ids.
    """

    n: int
    kernels: dict[str, tuple[int, ...]]
    local_coeffs: dict[tuple[str, str], int]
    network: Network

    @property
    def field(self) -> FieldSpec:
        return self.network.field

    def kernel(self, channel_id: str) -> tuple[int, ...]:
        if channel_id.startswith(IMAGINARY_PREFIX):
            j = int(channel_id[len(IMAGINARY_PREFIX):]) - 1
            if not 0 <= j < self.n:
                raise KeyError(channel_id)
            return standard_basis(self.n, j)
        return self.kernels[channel_id]

    def in_channel_ids(self, node: str) -> list[str]:
        """Incoming channel ids at a node; the source sees the imaginary inputs."""
        if node == self.network.source:
            return imaginary_ids(self.n)
        return [e.id for e in self.network.in_edges(node)]

    def kernel_matrix(self, edge_ids) -> Matrix:
        """Columns f_e for the given channel ids, in the given order."""
        cols = [self.kernel(eid) for eid in edge_ids]
        return Matrix.from_cols(self.field, cols, rows=self.n)


def _keeps_frontier_rank(
    field: FieldSpec,
    n: int,
    kernels: dict[str, tuple[int, ...]],
    frontier: list[str],
    slot: int,
    candidate: tuple[int, ...],
) -> bool:
    rows = [
        candidate if idx == slot else kernels[frontier[idx]]
        for idx in range(len(frontier))
    ]
    return rank_of_rows(field, rows) == n


def construct_lnc(net: Network, n: int) -> GlobalCode:
    """Build an n-dimensional decodable code on the network, deterministically.

    Requires n <= C_min and q >= |T|.  Edges on no flow path carry all-zero
    kernels; everything else follows the lexicographic coefficient search,
    so identical inputs reproduce identical codes byte for byte.
    """
    if n < 1:
        raise ValueError("code dimension must be at least 1")
    capacity = c_min(net)
    if n > capacity:
        raise DimensionExceedsCapacity(f"dimension {n} exceeds C_min = {capacity}")
    field = net.field
    if field.q < len(net.sinks):
        raise FieldTooSmallForSinks(
            f"flow-path construction needs q >= |T|; q={field.q}, |T|={len(net.sinks)}"
        )

    imag = imaginary_ids(n)
    kernels: dict[str, tuple[int, ...]] = {
        d: standard_basis(n, j) for j, d in enumerate(imag)
    }
    zero = (0,) * n

    on_path: dict[str, list[tuple[str, int]]] = {}
    for t in net.sinks:
        for j, path in enumerate(edge_disjoint_paths(net, t, n)):
            for eid in path:
                on_path.setdefault(eid, []).append((t, j))
    frontier: dict[str, list[str]] = {t: list(imag) for t in net.sinks}

    local_coeffs: dict[tuple[str, str], int] = {}
    for edge in net.topo_edges():
        tail_in = imag if edge.tail == net.source else [d.id for d in net.in_edges(edge.tail)]
        uses = on_path.get(edge.id, ())
        if not uses:
            for d in tail_in:
                local_coeffs[(d, edge.id)] = 0
            kernels[edge.id] = zero
            continue
        chosen = None
        for assignment in itertools.product(field.elements(), repeat=len(tail_in)):
            f = zero
            for coeff, d in zip(assignment, tail_in):
                if coeff:
                    f = vec_add(field, f, vec_scale(field, coeff, kernels[d]))
            if all(
                _keeps_frontier_rank(field, n, kernels, frontier[t], j, f)
                for t, j in uses
            ):
                chosen = (assignment, f)
                break
        if chosen is None:
            # Unreachable for q >= |T|; the flow-path feasibility argument
            # guarantees a valid assignment exists.
            raise AssertionError(f"no feasible coefficients for channel {edge.id}")
        assignment, f = chosen
        for coeff, d in zip(assignment, tail_in):
            local_coeffs[(d, edge.id)] = coeff
        kernels[edge.id] = f
        for t, j in uses:
            frontier[t][j] = edge.id

    real_kernels = {e.id: kernels[e.id] for e in net.edges}
    return GlobalCode(n=n, kernels=real_kernels, local_coeffs=local_coeffs, network=net)


# -- validity -------------------------------------------------------------------

@dataclass
class CodeValidityReport:
    """Every violated code invariant; empty report means the code is valid."""

    recursion_violations: dict[str, tuple[int, ...]] = dc_field(default_factory=dict)
    sink_rank_deficits: dict[str, int] = dc_field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.recursion_violations and not self.sink_rank_deficits


def check_code_validity(code: GlobalCode) -> CodeValidityReport:
    """Recompute every kernel from the local coefficients and rank every sink.

    Violations are reported as data, not raised: the recursion residual
    (stored kernel minus the local-coefficient combination) per offending
    edge, and the rank deficit per undecodable sink.
    """
    net = code.network
    field = code.field
    report = CodeValidityReport()
    for edge in net.edges:
        expected = (0,) * code.n
        for d in code.in_channel_ids(edge.tail):
            coeff = code.local_coeffs.get((d, edge.id), 0)
            if coeff:
                expected = vec_add(field, expected, vec_scale(field, coeff, code.kernel(d)))
        actual = code.kernels[edge.id]
        if actual != expected:
            residual = tuple(field.sub(a, b) for a, b in zip(actual, expected))
            report.recursion_violations[edge.id] = residual
    for t in net.sinks:
        rank = code.kernel_matrix(e.id for e in net.in_edges(t)).rank()
        if rank < code.n:
            report.sink_rank_deficits[t] = code.n - rank
    return report


# -- wiretap collections ----------------------------------------------------------

def enumerate_code_wiretap_sets(code: GlobalCode, r: int) -> WiretapCollection:
    """All size-r channel sets whose kernel matrix has full rank r."""
    if not 1 <= r < code.n:
        raise SecurityLevelTooLarge(f"need 1 <= r < n = {code.n}, got {r}")
    ids = sorted(e.id for e in code.network.edges)
    sets = tuple(
        combo
        for combo in itertools.combinations(ids, r)
        if code.kernel_matrix(combo).rank() == r
    )
    return WiretapCollection(r=r, kind="rank", sets=sets)


@dataclass(frozen=True)
class SubsetBoundReport:
    """Cross-check of the code collection against the topology collection."""

    subset_holds: bool
    code_count: int
    cut_count: int
    binomial: int

    def serialize(self) -> str:
        flag = "true" if self.subset_holds else "false"
        return f"subset={flag} code={self.code_count} cut={self.cut_count} binom={self.binomial}"


def verify_subset_bound(code: GlobalCode, r: int) -> SubsetBoundReport:
    """Check that the code collection sits inside the topology collection.

    A false subset flag signals an implementation bug, never a property of
    the inputs.
    """
    code_sets = enumerate_code_wiretap_sets(code, r)
    cut_sets = enumerate_topology_wiretap_sets(code.network, r)
    holds = set(code_sets.sets) <= set(cut_sets.sets)
    return SubsetBoundReport(
        subset_holds=holds,
        code_count=len(code_sets),
        cut_count=len(cut_sets),
        binomial=math.comb(len(code.network.edges), r),
    )


# -- text format ------------------------------------------------------------------

def code_body_lines(code: GlobalCode) -> list[str]:
    """Kernel and local lines (no header), in network declaration order."""
    net = code.network
    lines = [
        "kernel " + e.id + " " + " ".join(str(c) for c in code.kernels[e.id])
        for e in net.edges
    ]
    for e in net.edges:
        if e.tail == net.source:
            continue  # imaginary-channel coefficients are implied by the kernel
        for d in net.in_edges(e.tail):
            lines.append(f"local {d.id} {e.id} {code.local_coeffs.get((d.id, e.id), 0)}")
    return lines


def write_code(code: GlobalCode) -> str:
    header = f"code n={code.n} q={code.field.q}"
    return "\n".join([header] + code_body_lines(code)) + "\n"


def _parse_header(line: str) -> tuple[int, int]:
    tokens = line.split()
    if len(tokens) != 3 or tokens[0] != "code":
        raise ParseError(f"bad code header: {line!r}")
    values = {}
    for tok in tokens[1:]:
        key, _, val = tok.partition("=")
        try:
            values[key] = int(val)
        except ValueError:
            raise ParseError(f"bad code header token {tok!r}") from None
    if set(values) != {"n", "q"}:
        raise ParseError(f"code header needs n= and q=: {line!r}")
    return values["n"], values["q"]


def parse_code_lines(net: Network, n: int, q: int, lines: list[str]) -> GlobalCode:
    """Assemble a code from already-split kernel/local lines."""
    if q != net.field.q:
        raise ParseError(f"code field q={q} does not match network field q={net.field.q}")
    if n < 1:
        raise ParseError(f"bad code dimension {n}")
    field = net.field
    kernels: dict[str, tuple[int, ...]] = {}
    local_coeffs: dict[tuple[str, str], int] = {}
    for line in lines:
        tokens = line.split()
        if tokens[0] == "kernel":
            if len(tokens) != 2 + n:
                raise ParseError(f"kernel line needs {n} entries: {line!r}")
            eid = tokens[1]
            net.edge(eid)
            if eid in kernels:
                raise ParseError(f"duplicate kernel for {eid}")
            try:
                kernels[eid] = tuple(field.check(int(x)) for x in tokens[2:])
            except ValueError:
                raise ParseError(f"non-integer kernel entry: {line!r}") from None
        elif tokens[0] == "local":
            if len(tokens) != 4:
                raise ParseError(f"local line needs d, e, k: {line!r}")
            d_id, e_id = tokens[1], tokens[2]
            if d_id.startswith(IMAGINARY_PREFIX):
                raise ParseError("imaginary-channel coefficients are never serialized")
            d, e = net.edge(d_id), net.edge(e_id)
            if d.head != e.tail:
                raise ParseError(f"channels {d_id} and {e_id} are not adjacent")
            try:
                local_coeffs[(d_id, e_id)] = field.check(int(tokens[3]))
            except ValueError:
                raise ParseError(f"non-integer coefficient: {line!r}") from None
        else:
            raise ParseError(f"unexpected line in code body: {line!r}")
    missing = [e.id for e in net.edges if e.id not in kernels]
    if missing:
        raise ParseError(f"missing kernel lines for: {', '.join(missing)}")
    for e in net.edges:
        if e.tail == net.source:
            for j, d in enumerate(imaginary_ids(n)):
                local_coeffs[(d, e.id)] = kernels[e.id][j]
    return GlobalCode(n=n, kernels=kernels, local_coeffs=local_coeffs, network=net)


def parse_code(text: str, net: Network) -> GlobalCode:
    """Parse a code file for a known network."""
    body: list[str] = []
    header: str | None = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("code"):
            if header is not None:
                raise ParseError("duplicate code header")
            header = line
        else:
            body.append(line)
    if header is None:
        raise ParseError("missing code header")
    n, q = _parse_header(header)
    return parse_code_lines(net, n, q, body)
