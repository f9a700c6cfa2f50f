"""Finite free (Z/2)^r cell complexes.

Cells carry a dimension, every group generator acts by a fixed-point
free dimension-preserving involution, the involutions commute, all
orbits have the full size 2^r, and the boundary is equivariant with
square zero.  Optional per-cell vertex lists (simplicial structure)
enable the front/back-face coproduct.

The JSON schema (CLI flag --complex FILE):

    {"r": 1,
     "cells": [{"name": "v", "dim": 0}, ...],
     "action": {"g1": {"v": "gv", "gv": "v", ...}},
     "boundary": {"e": [["1", "v"], ["g1", "v"]], ...},
     "vertices": {"e": ["v", "gv"], ...}}          # optional

A boundary entry ["g1*g2", "c"] means the group word applied to cell c;
"1" is the identity word.
"""

from __future__ import annotations

import json

import numpy as np

from .complexes import GradedKComplex
from .dgmodules import DgLambdaModule, freeness_certificate
from .errors import ValidationError
from .gf2 import Gf2Matrix


def render_group_word(j_set):
    if not j_set:
        return "1"
    return "*".join(f"g{i}" for i in sorted(j_set))


def parse_group_word(text, r):
    text = text.strip()
    if text == "1":
        return frozenset()
    out = set()
    for factor in text.split("*"):
        factor = factor.strip()
        if not factor.startswith("g"):
            raise ValidationError(f"bad group word factor {factor!r}")
        idx = int(factor[1:])
        if not 1 <= idx <= r:
            raise ValidationError(f"generator g{idx} out of range for r={r}")
        out ^= {idx}
    return frozenset(out)


class FreeGComplex:
    """Validated free G-cell complex; cells in canonical order."""

    __slots__ = ("r", "cells", "dims", "action", "boundary", "vertices",
                 "pos", "orbit_rep", "group_word")

    def __init__(self, r, cells, action, boundary, vertices=None):
        self.r = r
        cells = [(str(n), int(d)) for n, d in cells]
        names = [n for n, _ in cells]
        if len(set(names)) != len(names):
            raise ValidationError("duplicate cell names")
        name_dim = dict(cells)
        self.action = [dict(action[i]) for i in range(r)]
        self.boundary = {
            name: [(frozenset(j), str(c)) for j, c in terms]
            for name, terms in boundary.items()
        }
        self.vertices = {k: tuple(v) for k, v in (vertices or {}).items()}

        issues = []
        for gi, table in enumerate(self.action, start=1):
            for src, dst in table.items():
                if src not in name_dim or dst not in name_dim:
                    issues.append(f"g{gi} maps unknown cell {src!r} -> {dst!r}")
                elif name_dim[src] != name_dim[dst]:
                    issues.append(f"g{gi} does not preserve dimension at {src!r}")
            for name in names:
                if name not in table:
                    issues.append(f"g{gi} missing image of {name!r}")
        if issues:
            raise ValidationError("invalid action table", issues)
        for gi, table in enumerate(self.action, start=1):
            for name in names:
                if table[table[name]] != name:
                    raise ValidationError(f"g{gi} is not an involution at {name!r}")
                if table[name] == name:
                    raise ValidationError(
                        f"g{gi} fixes cell {name!r}: action is not free"
                    )
        for a in range(r):
            for b in range(a + 1, r):
                for name in names:
                    if self.action[a][self.action[b][name]] != self.action[b][self.action[a][name]]:
                        raise ValidationError(
                            f"g{a+1} and g{b+1} do not commute at {name!r}"
                        )

        # orbits (freeness: 2^r distinct cells each)
        self.orbit_rep = {}
        self.group_word = {}
        for name in names:
            if name in self.orbit_rep:
                continue
            orbit = {}
            for bits in range(1 << r):
                j = frozenset(i + 1 for i in range(r) if bits >> i & 1)
                orbit[j] = self._apply_word(j, name)
            if len(set(orbit.values())) != 1 << r:
                raise ValidationError(
                    f"orbit of cell {name!r} has size {len(set(orbit.values()))}"
                    f" < {1 << r}: action is not free"
                )
            rep = min(orbit.values())
            for j in orbit:
                cell = self._apply_word(j, rep)
                self.orbit_rep[cell] = rep
                self.group_word[cell] = j

        # canonical order: dimension-major, orbit representative, word bits
        def word_bits(j):
            return sum(1 << (i - 1) for i in j)

        self.cells = sorted(
            cells,
            key=lambda nd: (nd[1], self.orbit_rep[nd[0]], word_bits(self.group_word[nd[0]])),
        )
        self.pos = {n: k for k, (n, _) in enumerate(self.cells)}
        self.dims = {}
        for n, d in self.cells:
            self.dims.setdefault(d, []).append(n)

        self._validate_boundary()

    def _apply_word(self, j_set, name):
        for i in sorted(j_set):
            name = self.action[i - 1][name]
        return name

    def _chain_of(self, terms):
        """Expand (group word, cell) terms to a parity set of cell names."""
        acc = {}
        for j, cell in terms:
            if cell not in self.pos:
                raise ValidationError(f"boundary mentions unknown cell {cell!r}")
            target = self._apply_word(j, cell)
            acc[target] = acc.get(target, 0) ^ 1
        return frozenset(c for c, v in acc.items() if v)

    def _validate_boundary(self):
        name_dim = dict(self.cells)
        issues = []
        chains = {}
        for name, _ in self.cells:
            chain = self._chain_of(self.boundary.get(name, []))
            for c in chain:
                if name_dim[c] != name_dim[name] - 1:
                    issues.append(
                        f"boundary of {name!r} hits {c!r} of dimension {name_dim[c]}"
                    )
            chains[name] = chain
        if issues:
            raise ValidationError("boundary dimensions wrong", issues)
        # equivariance
        for gi, table in enumerate(self.action, start=1):
            for name, _ in self.cells:
                lhs = chains[table[name]]
                rhs = frozenset(table[c] for c in chains[name])
                if lhs != rhs:
                    raise ValidationError(
                        f"boundary not equivariant: d(g{gi} {name}) != g{gi} d({name})"
                    )
        # d^2 = 0
        for name, _ in self.cells:
            acc = {}
            for c in chains[name]:
                for c2 in chains[c]:
                    acc[c2] = acc.get(c2, 0) ^ 1
            if any(acc.values()):
                raise ValidationError(f"d^2 != 0 at cell {name!r}")

    # -- shape ------------------------------------------------------------

    def dim_count(self, d):
        return len(self.dims.get(d, []))

    def top_dim(self):
        return max(self.dims) if self.dims else 0

    def total_cells(self):
        return len(self.cells)

    def orbit_count(self):
        return len(set(self.orbit_rep.values()))

    def __eq__(self, other):
        if not isinstance(other, FreeGComplex):
            return NotImplemented
        return (
            self.r == other.r
            and self.cells == other.cells
            and self.action == other.action
            and {n: self._chain_of(t) for n, t in self.boundary.items() if t}
            == {n: other._chain_of(t) for n, t in other.boundary.items() if t}
        )

    # -- conversion ---------------------------------------------------------

    def to_lambda_module(self):
        """DgLambdaModule plus a freeness certificate (orbit reps)."""
        local = {}
        for d, names in self.dims.items():
            for k, n in enumerate(names):
                local[n] = k
        dmats = {}
        for d in sorted(self.dims):
            tgt = self.dims.get(d - 1, [])
            cols = []
            for name in self.dims[d]:
                chain = self._chain_of(self.boundary.get(name, []))
                cols.append([local[c] for c in chain])
            dmats[d] = Gf2Matrix.from_columns(cols, len(tgt))
        tmats = [dict() for _ in range(self.r)]
        for i in range(1, self.r + 1):
            for d, names in self.dims.items():
                dense = np.zeros((len(names), len(names)), dtype=np.uint8)
                for k, n in enumerate(names):
                    dense[k, k] ^= 1
                    dense[local[self.action[i - 1][n]], k] ^= 1
                tmats[i - 1][d] = Gf2Matrix.from_dense(dense)
        module = DgLambdaModule(self.r, list(self.cells), dmats, tmats)
        cert = freeness_certificate(module)
        return module, cert

    def to_complex(self):
        module, _ = self.to_lambda_module()
        return module.to_complex()

    # -- serialization ---------------------------------------------------------

    def to_json_dict(self):
        data = {
            "r": self.r,
            "cells": [{"name": n, "dim": d} for n, d in self.cells],
            "action": {
                f"g{i}": {n: self.action[i - 1][n] for n, _ in self.cells}
                for i in range(1, self.r + 1)
            },
            "boundary": {
                name: sorted(
                    [render_group_word(j), c] for j, c in terms
                )
                for name, terms in self.boundary.items()
                if terms
            },
        }
        if self.vertices:
            data["vertices"] = {k: list(v) for k, v in self.vertices.items()}
        return data

    def to_json(self):
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_json_dict(cls, data):
        r = int(data["r"])
        cells = [(c["name"], int(c["dim"])) for c in data["cells"]]
        action = []
        for i in range(1, r + 1):
            key = f"g{i}"
            if key not in data.get("action", {}):
                raise ValidationError(f"missing action table for {key}")
            action.append(dict(data["action"][key]))
        boundary = {}
        for name, terms in data.get("boundary", {}).items():
            boundary[name] = [(parse_group_word(w, r), c) for w, c in terms]
        vertices = data.get("vertices")
        return cls(r, cells, action, boundary, vertices)

    @classmethod
    def from_json(cls, text):
        return cls.from_json_dict(json.loads(text))


def parse_complex(path_or_file):
    """Load and validate a FreeGComplex from a JSON file."""
    if hasattr(path_or_file, "read"):
        data = json.load(path_or_file)
    else:
        with open(path_or_file) as fh:
            data = json.load(fh)
    return FreeGComplex.from_json_dict(data)


# -- builtin spaces ----------------------------------------------------------------

def builtin(name, r=1, n=1):
    """Standard free complexes: "orbit" (G itself), "sphere" (minimal
    free Z/2 model, two cells per dimension), "torus" (r circles with
    the coordinatewise antipodal action)."""
    if name == "orbit":
        cells = [(f"o{bits}", 0) for bits in range(1 << r)]
        action = [
            {f"o{bits}": f"o{bits ^ (1 << i)}" for bits in range(1 << r)}
            for i in range(r)
        ]
        return FreeGComplex(r, cells, action, {})
    if name == "sphere":
        if r != 1:
            raise ValidationError("sphere builtin requires r = 1")
        cells = [(f"a{d}", d) for d in range(n + 1)] + [(f"b{d}", d) for d in range(n + 1)]
        action = [{**{f"a{d}": f"b{d}" for d in range(n + 1)},
                   **{f"b{d}": f"a{d}" for d in range(n + 1)}}]
        boundary = {}
        for d in range(1, n + 1):
            terms = [(frozenset(), f"a{d-1}"), (frozenset(), f"b{d-1}")]
            boundary[f"a{d}"] = terms
            boundary[f"b{d}"] = list(terms)
        vertices = None
        if n == 1:
            vertices = {"a0": ["a0"], "b0": ["b0"],
                        "a1": ["a0", "b0"], "b1": ["b0", "a0"]}
        return FreeGComplex(1, cells, action, boundary, vertices)
    if name == "torus":
        return _torus(r)
    raise ValidationError(f"unknown builtin {name!r}")


def _torus(r):
    circle_cells = {"a0": 0, "b0": 0, "a1": 1, "b1": 1}
    flip = {"a0": "b0", "b0": "a0", "a1": "b1", "b1": "a1"}
    circle_boundary = {"a1": ["a0", "b0"], "b1": ["a0", "b0"], "a0": [], "b0": []}
    combos = list(product_tuples(sorted(circle_cells), r))
    cells = [("x".join(c), sum(circle_cells[p] for p in c)) for c in combos]
    action = []
    for i in range(r):
        table = {}
        for c in combos:
            image = list(c)
            image[i] = flip[c[i]]
            table["x".join(c)] = "x".join(image)
        action.append(table)
    boundary = {}
    for c in combos:
        terms = []
        for i in range(r):
            for tgt in circle_boundary[c[i]]:
                image = list(c)
                image[i] = tgt
                terms.append((frozenset(), "x".join(image)))
        if terms:
            boundary["x".join(c)] = terms
    return FreeGComplex(r, cells, action, boundary)


def product_tuples(items, k):
    if k == 0:
        return [()]
    rest = product_tuples(items, k - 1)
    return [(x,) + t for x in items for t in rest]


def simplicial_circle():
    """The square circle: 4 vertices, 4 edges, antipodal rotation by 2."""
    cells = [(f"v{i}", 0) for i in range(4)] + [(f"e{i}", 1) for i in range(4)]
    action = [{**{f"v{i}": f"v{(i + 2) % 4}" for i in range(4)},
               **{f"e{i}": f"e{(i + 2) % 4}" for i in range(4)}}]
    boundary = {
        f"e{i}": [(frozenset(), f"v{i}"), (frozenset(), f"v{(i + 1) % 4}")]
        for i in range(4)
    }
    vertices = {f"v{i}": [f"v{i}"] for i in range(4)}
    vertices.update({f"e{i}": [f"v{i}", f"v{(i + 1) % 4}"] for i in range(4)})
    return FreeGComplex(1, cells, action, boundary, vertices)


def random_free_complex(r, seed, max_orbits_per_dim=3, max_dim=3):
    """Seeded random free complex; boundaries of orbit representatives
    are sampled from the kernel of the previous differential and
    extended equivariantly, so d^2 = 0 and equivariance hold by
    construction."""
    rng = np.random.default_rng(seed)
    top = int(rng.integers(1, max_dim + 1))
    orbit_counts = [int(rng.integers(1, max_orbits_per_dim + 1)) for _ in range(top + 1)]

    # cell (d, o, bits) named cd_o_wbits
    def cname(d, o, bits):
        return f"c{d}o{o}w{bits}"

    cells = []
    for d, count in enumerate(orbit_counts):
        for o in range(count):
            for bits in range(1 << r):
                cells.append((cname(d, o, bits), d))
    action = []
    for i in range(r):
        table = {}
        for d, count in enumerate(orbit_counts):
            for o in range(count):
                for bits in range(1 << r):
                    table[cname(d, o, bits)] = cname(d, o, bits ^ (1 << i))
        action.append(table)

    # basis of dimension d: (o, bits) in lex order
    def basis(d):
        return [(o, bits) for o in range(orbit_counts[d]) for bits in range(1 << r)]

    boundary = {}
    prev_d_mat = None
    for d in range(1, top + 1):
        tgt = basis(d - 1)
        if prev_d_mat is None:
            kernel = Gf2Matrix.identity(len(tgt))
        else:
            kernel = prev_d_mat.kernel_basis()
        cols = {}
        for o in range(orbit_counts[d]):
            combo = Gf2Matrix.zeros(len(tgt), 1)
            if kernel.cols:
                picks = rng.integers(0, 2, size=kernel.cols)
                chosen = [j for j in range(kernel.cols) if picks[j]]
                if chosen:
                    combo = Gf2Matrix.from_dense(
                        kernel.to_dense()[:, chosen].sum(axis=1).reshape(-1, 1) % 2
                    )
            terms = []
            for k, (o2, bits2) in enumerate(tgt):
                if combo.get(k, 0):
                    j = frozenset(i + 1 for i in range(r) if bits2 >> i & 1)
                    terms.append((j, cname(d - 1, o2, 0)))
            boundary[cname(d, o, 0)] = terms
            cols[o] = combo
        # equivariant extension to the whole orbit
        for o in range(orbit_counts[d]):
            base_terms = boundary[cname(d, o, 0)]
            for bits in range(1, 1 << r):
                j_out = frozenset(i + 1 for i in range(r) if bits >> i & 1)
                boundary[cname(d, o, bits)] = [
                    (j ^ j_out, c) for j, c in base_terms
                ]
        # matrix of d for the next kernel computation
        dense = np.zeros((len(tgt), len(basis(d))), dtype=np.uint8)
        src_index = {ob: k for k, ob in enumerate(basis(d))}
        tgt_index = {ob: k for k, ob in enumerate(tgt)}
        for o in range(orbit_counts[d]):
            for bits in range(1 << r):
                for j, c in boundary[cname(d, o, bits)]:
                    # c is a representative name c{d-1}o{o2}w0
                    o2 = int(c.split("o")[1].split("w")[0])
                    wbits = sum(1 << (i - 1) for i in j)
                    dense[tgt_index[(o2, wbits)], src_index[(o, bits)]] ^= 1
        prev_d_mat = Gf2Matrix.from_dense(dense)
    return FreeGComplex(r, cells, action, boundary)


# -- front/back-face coproduct ---------------------------------------------------------

class AWData:
    """Coproduct matrices C_n -> (C (x) C)_n with the pair-block layout."""

    __slots__ = ("complex", "module", "blocks", "delta")

    def __init__(self, cx, module, blocks, delta):
        self.complex = cx
        self.module = module
        self.blocks = blocks  # n -> list of (p, q, offset)
        self.delta = delta    # n -> Gf2Matrix

    def block(self, n, p, q):
        """The C_n -> C_p (x) C_q component (Kronecker column order)."""
        dn = self.delta.get(n)
        dims = {m: self.complex.dim(m) for m in self.complex.degrees()}
        rows = dims.get(p, 0) * dims.get(q, 0)
        if dn is None or rows == 0:
            return Gf2Matrix.zeros(rows, dims.get(n, 0))
        for (bp, bq, off) in self.blocks[n]:
            if (bp, bq) == (p, q):
                return dn.take_rows(range(off, off + rows))
        return Gf2Matrix.zeros(rows, dims.get(n, 0))


def aw_coproduct(x):
    """Front-face/back-face coproduct on a complex with vertex lists.

    Delta[v0..vk] = sum_j [v0..vj] (x) [vj..vk]; every face must itself
    be a cell.  Coassociative, a chain map, and equivariant in the
    group-element basis; all three are exact matrix identities.
    """
    missing = [n for n, _ in x.cells if n not in x.vertices]
    if missing:
        raise ValidationError(
            "cells lack simplicial structure: " + ", ".join(sorted(missing)[:5])
        )
    by_vertices = {tuple(x.vertices[n]): n for n, _ in x.cells}
    module, _ = x.to_lambda_module()
    cx = module.to_complex()
    local = {}
    for d, names in x.dims.items():
        for k, n in enumerate(names):
            local[n] = (d, k)

    blocks, delta = {}, {}
    for n in cx.degrees():
        layout = []
        offset = 0
        for p in cx.degrees():
            q = n - p
            if q < cx.lo or q > cx.hi:
                continue
            layout.append((p, q, offset))
            offset += cx.dim(p) * cx.dim(q)
        blocks[n] = layout
        dense = np.zeros((offset, cx.dim(n)), dtype=np.uint8)
        for name in x.dims.get(n, []):
            verts = x.vertices[name]
            _, col = local[name]
            for cut in range(len(verts)):
                front = tuple(verts[: cut + 1])
                back = tuple(verts[cut:])
                fcell = by_vertices.get(front)
                bcell = by_vertices.get(back)
                if fcell is None or bcell is None:
                    raise ValidationError(
                        f"face of {name!r} is not a cell: {front} / {back}"
                    )
                (p, fk) = local[fcell]
                (q, bk) = local[bcell]
                for (bp, bq, off) in layout:
                    if (bp, bq) == (p, q):
                        dense[off + fk * cx.dim(q) + bk, col] ^= 1
                        break
        delta[n] = Gf2Matrix.from_dense(dense)
    return AWData(cx, module, blocks, delta)


def cochain_algebra(x):
    """Cochain complex (degrees negated so d has degree -1) with the cup
    product blocks dual to the coproduct, ready for product transfer."""
    aw = aw_coproduct(x)
    cx = aw.complex
    top = cx.hi
    dims = {-n: cx.dim(n) for n in cx.degrees()}
    dmats = {}
    for n in cx.degrees():
        # E_{-n} -> E_{-n-1} is the transpose of d_{n+1} : C_{n+1} -> C_n
        dmats[-n] = cx.diff(n + 1).transpose()
    dual = GradedKComplex(-top, 0, dims, {m: dmats[m] for m in dmats if -top < m <= 0})
    mul = {}
    for p in cx.degrees():
        for q in cx.degrees():
            if p + q > top:
                continue
            blk = aw.block(p + q, p, q)
            mul[(-p, -q)] = blk.transpose()
    return dual, mul
