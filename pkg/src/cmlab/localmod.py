"""Local structures at the reduction prime: the Bruhat-Tits tree for
PGL_2(Q_p), truncated local quaternion orders over the unramified quadratic
Witt ring, and the bimodule classifier (admissibility and type (r, s)).

Tree vertices are homothety classes of rank-2 Z_p-lattices.  A vertex at
distance n from the root corresponds to a point of P^1(Z/p^n): canonical
representatives are (n, (1 : u)) with u mod p^n, or (n, (v : 1)) with v in
p*Z/p^n for the second affine chart.

Truncated Witt arithmetic is (Z/p^k)[t]/(t^2 - r) with r a fixed non-residue
mod p; sigma sends t to -t.  The local order is W + W*Pi with Pi^2 = p and
Pi*a = sigma(a)*Pi.  Bimodules are Z/p^k-modules with commuting left and
right action matrices of the generators; the type of an admissible rank-8
bimodule is read off the residue quotient M / M*(Pi) by splitting it into the
part where the left residue action of t equals the right one and the part
where it equals its twist.
"""

from dataclasses import dataclass
from functools import lru_cache

from .arith import is_prime, legendre
from .intlat import frac_det


# ---------------------------------------------------------------------------
# Bruhat-Tits tree


@dataclass(frozen=True)
class BTVertex:
    """Canonical vertex: lattice class at distance n from the root.

    chart 0: column span of [[p^n, u], [0, 1]]  (the line (1 : u));
    chart 1: column span of [[1, 0], [0, p^n]] shifted by v, i.e. the line
    (v : 1) with v divisible by p.
    """

    p: int
    n: int
    chart: int
    u: int

    def __post_init__(self):
        if self.n < 0 or self.chart not in (0, 1):
            raise ValueError("invalid vertex data")
        mod = self.p**self.n
        if self.n == 0:
            if self.u != 0 or self.chart != 0:
                raise ValueError("the root is (n=0, chart=0, u=0)")
        elif self.chart == 0:
            if not 0 <= self.u < mod:
                raise ValueError("chart-0 representative needs 0 <= u < p^n")
        else:
            if not 0 <= self.u < mod or self.u % self.p:
                raise ValueError("chart-1 representative needs p | u")

    def basis_matrix(self):
        """Column basis of a representative lattice."""
        pn = self.p**self.n
        if self.chart == 0:
            # {(x, y): x == u*y mod p^n}: columns (p^n, 0), (u, 1)
            return [[pn, self.u], [0, 1]]
        # chart 1, u = v: {(x, y): y == v*x mod p^n}: columns (1, v), (0, p^n)
        return [[1, 0], [self.u, pn]]

    def line(self):
        """The kernel line in P^1(Z/p^n) defining the vertex."""
        if self.chart == 0:
            return (1, (-self.u) % self.p**self.n)
        return ((-self.u) % self.p**self.n, 1)


def bt_root(p: int) -> BTVertex:
    return BTVertex(p, 0, 0, 0)


def _vertex_from_line(p, n, r, s):
    """Canonical vertex for the lattice {(x,y): r x + s y == 0 mod p^n}."""
    mod = p**n
    if n == 0:
        return bt_root(p)
    if r % p:
        inv = pow(r, -1, mod)
        u = (-s * inv) % mod  # x == u * y, basis [[p^n, u],[0,1]]
        return BTVertex(p, n, 0, u)
    inv = pow(s, -1, mod)
    v = (-r * inv) % mod
    return BTVertex(p, n, 1, v)


def bt_neighbors(v: BTVertex):
    """The p + 1 adjacent vertices, canonical and pairwise distinct."""
    p = v.p
    out = []
    if v.n == 0:
        for u in range(p):
            out.append(BTVertex(p, 1, 0, u))
        out.append(BTVertex(p, 1, 1, 0))
        return out
    # parent: reduce the defining line mod p^(n-1)
    r, s = v.line()
    out.append(_vertex_from_line(p, v.n - 1, r % p**(v.n - 1), s % p**(v.n - 1)))
    # children: the p lifts of the line mod p^(n+1)
    for t in range(p):
        if v.chart == 0:
            rr, ss = 1, (v.line()[1] + t * p**v.n) % p**(v.n + 1)
        else:
            rr, ss = (v.line()[0] + t * p**v.n) % p**(v.n + 1), 1
        out.append(_vertex_from_line(p, v.n + 1, rr, ss))
    return out


def bt_distance(v: BTVertex, w: BTVertex) -> int:
    """Tree distance via elementary divisors of the relative position matrix."""
    if v.p != w.p:
        raise ValueError("vertices live on trees of different residue characteristic")
    p = v.p
    a = v.basis_matrix()
    b = w.basis_matrix()
    det_a = a[0][0] * a[1][1] - a[0][1] * a[1][0]
    # m = a^-1 * b, cleared of denominators
    adj = [[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]]
    m = [[adj[i][0] * b[0][j] + adj[i][1] * b[1][j] for j in range(2)] for i in range(2)]
    # elementary divisor valuations of m (nonzero integer matrix)
    entries = [x for row in m for x in row if x]
    v1 = min(_valp(x, p) for x in entries)
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    v2 = _valp(det, p) - v1
    return abs(v2 - v1)


def _valp(x: int, p: int) -> int:
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


@dataclass
class TreePatch:
    """A radius ball of the tree with the dual-graph labelling."""

    p: int
    radius: int
    vertices: list  # BTVertex, vertices <-> irreducible components
    edges: list  # (index, index), edges <-> singular points

    def degree(self, idx):
        return sum(1 for e in self.edges if idx in e)


def dual_graph_patch(p: int, radius: int) -> TreePatch:
    """The radius ball, vertices labelled as components, edges as singular points."""
    if radius > 6:
        raise ValueError("radius larger than 6 is not supported")
    root = bt_root(p)
    order = [root]
    index = {root: 0}
    edges = set()
    frontier = [root]
    for _ in range(radius):
        nxt = []
        for v in frontier:
            for w in bt_neighbors(v):
                if w not in index:
                    index[w] = len(order)
                    order.append(w)
                    nxt.append(w)
                edges.add((min(index[v], index[w]), max(index[v], index[w])))
        frontier = nxt
    # drop edges to outside the ball: all endpoints are in `index` by
    # construction, but edges from the boundary outward were only added when
    # the far vertex was created; the loop above only creates vertices within
    # the radius, so the edge set is exactly the ball's edge set.
    return TreePatch(p, radius, order, sorted(edges))


def tree_patch_json(patch: TreePatch) -> dict:
    return {
        "p": patch.p,
        "radius": patch.radius,
        "vertices": [{"index": i, "n": v.n, "chart": v.chart, "u": v.u,
                      "label": "component"} for i, v in enumerate(patch.vertices)],
        "edges": [{"ends": list(e), "label": "singular point"} for e in patch.edges],
    }


def tree_patch_dot(patch: TreePatch) -> str:
    lines = [f"graph tree_p{patch.p} {{"]
    for i, v in enumerate(patch.vertices):
        lines.append(f'  v{i} [label="({v.n},{v.chart},{v.u})"];')
    for a, b in patch.edges:
        lines.append(f"  v{a} -- v{b};")
    lines.append("}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# truncated Witt vectors and the local quaternion order


@lru_cache(maxsize=None)
def _nonresidue(p: int) -> int:
    for r in range(2, p):
        if legendre(r, p) == -1:
            return r
    raise ValueError("p must be an odd prime")


class WittRing:
    """(Z/p^k)[t]/(t^2 - r), the length-k quotient of the unramified quadratic
    extension; sigma(t) = -t lifts the Frobenius."""

    def __init__(self, p: int, k: int):
        if p == 2:
            raise ValueError("wild ramification unsupported")
        if not is_prime(p):
            raise ValueError("p must be prime")
        self.p = p
        self.k = k
        self.m = p**k
        self.r = _nonresidue(p)

    def add(self, x, y):
        return ((x[0] + y[0]) % self.m, (x[1] + y[1]) % self.m)

    def mul(self, x, y):
        return ((x[0] * y[0] + self.r * x[1] * y[1]) % self.m,
                (x[0] * y[1] + x[1] * y[0]) % self.m)

    def sigma(self, x):
        return (x[0], (-x[1]) % self.m)

    def norm(self, x):
        return (x[0] * x[0] - self.r * x[1] * x[1]) % self.m

    def one(self):
        return (1, 0)

    def zero(self):
        return (0, 0)

    def gen(self):
        return (0, 1)

    def scalar(self, a):
        return (a % self.m, 0)

    def is_unit(self, x):
        return self.norm(x) % self.p != 0

    def inv(self, x):
        n = self.norm(x)
        ninv = pow(n, -1, self.m)
        return ((x[0] * ninv) % self.m, (-x[1] * ninv) % self.m)

    def unit_with_norm(self, target: int):
        """Some u with N(u) == target mod p^k (Hensel from a mod-p solution)."""
        p, m = self.p, self.m
        for a in range(p):
            for b in range(p):
                if (a * a - self.r * b * b - target) % p == 0 and (a or b):
                    x = [a, b]
                    prec = 1
                    while prec < self.k:
                        # Newton step on f(a,b) = a^2 - r b^2 - target
                        f = x[0] * x[0] - self.r * x[1] * x[1] - target
                        if x[0] % p:
                            da = (-f * pow(2 * x[0], -1, m)) % m
                            x[0] = (x[0] + da) % m
                        else:
                            db = (f * pow(2 * self.r * x[1], -1, m)) % m
                            x[1] = (x[1] + db) % m
                        prec *= 2
                    if (x[0] * x[0] - self.r * x[1] * x[1] - target) % m == 0:
                        return (x[0], x[1])
        raise ArithmeticError("no unit of the requested norm")


class LocalQuatOrder:
    """W + W*Pi with Pi^2 = p, Pi a = sigma(a) Pi; elements are (a, b) = a + Pi b."""

    def __init__(self, p: int, k: int):
        self.w = WittRing(p, k)
        self.p = p
        self.k = k
        self.m = p**k

    def mul(self, x, y):
        # (a + Pi b)(c + Pi d) = (ac + p sigma(b) d) + Pi (sigma(a) d + b c)
        w = self.w
        a, b = x
        c, d = y
        return (w.add(w.mul(a, c), _wscale(w, self.p, w.mul(w.sigma(b), d))),
                w.add(w.mul(w.sigma(a), d), w.mul(b, c)))

    def add(self, x, y):
        return (self.w.add(x[0], y[0]), self.w.add(x[1], y[1]))

    def one(self):
        return (self.w.one(), self.w.zero())

    def pi(self):
        return (self.w.zero(), self.w.one())

    def embed_w(self, a):
        return (a, self.w.zero())

    def basis(self):
        """W-basis tags: 1, t, Pi, Pi*t as a rank-4 Z/p^k module."""
        w = self.w
        return [((1, 0), (0, 0)), ((0, 1), (0, 0)), ((0, 0), (1, 0)), ((0, 0), (0, 1))]

    def coords(self, x):
        (a0, a1), (b0, b1) = x
        return [a0, a1, b0, b1]

    def from_coords(self, c):
        return ((c[0] % self.m, c[1] % self.m), (c[2] % self.m, c[3] % self.m))


def _wscale(w: WittRing, s: int, x):
    return ((s * x[0]) % w.m, (s * x[1]) % w.m)


# ---------------------------------------------------------------------------
# bimodules


class LocalBimodule:
    """A Z/p^k-module of finite rank with commuting left/right order actions.

    Actions are given by matrices (rows act on coordinate rows from the
    right): left_t, left_pi for the left action of t and Pi, right_t,
    right_pi for the right action.
    """

    def __init__(self, p, k, rank, left_t, left_pi, right_t, right_pi):
        self.p = p
        self.k = k
        self.m = p**k
        self.rank = rank
        self.left_t = left_t
        self.left_pi = left_pi
        self.right_t = right_t
        self.right_pi = right_pi
        self._r = _nonresidue(p)
        self._validate()

    def _validate(self):
        m = self.m
        r = self._r
        lt, lp = self.left_t, self.left_pi
        rt, rp = self.right_t, self.right_pi
        _assert_mat(_matmul_mod(lt, lt, m), _scalar_mat(r, self.rank, m), "left t^2 = r")
        _assert_mat(_matmul_mod(lp, lp, m), _scalar_mat(self.p, self.rank, m), "left Pi^2 = p")
        _assert_mat(_matmul_mod(rt, rt, m), _scalar_mat(r, self.rank, m), "right t^2 = r")
        _assert_mat(_matmul_mod(rp, rp, m), _scalar_mat(self.p, self.rank, m), "right Pi^2 = p")
        anti_l = _mat_add(_matmul_mod(lp, lt, m), _matmul_mod(lt, lp, m), m)
        _assert_mat(anti_l, _scalar_mat(0, self.rank, m), "left Pi t = -t Pi")
        anti_r = _mat_add(_matmul_mod(rp, rt, m), _matmul_mod(rt, rp, m), m)
        _assert_mat(anti_r, _scalar_mat(0, self.rank, m), "right Pi t = -t Pi")
        for a in (lt, lp):
            for b in (rt, rp):
                if _matmul_mod(a, b, m) != _matmul_mod(b, a, m):
                    raise ValueError("left and right actions do not commute")


def _scalar_mat(s, n, m):
    return [[s % m if i == j else 0 for j in range(n)] for i in range(n)]


def _matmul_mod(a, b, m):
    n = len(a)
    return [[sum(a[i][t] * b[t][j] for t in range(n)) % m for j in range(n)] for i in range(n)]


def _mat_add(a, b, m):
    n = len(a)
    return [[(a[i][j] + b[i][j]) % m for j in range(n)] for i in range(n)]


def _assert_mat(a, b, what):
    if a != b:
        raise ValueError(f"bimodule relation violated: {what}")


def _span_canonical(mats, p, k, rank):
    """Canonical integer HNF of the row span over Z/p^k.

    Spans over Z/p^k correspond to integer lattices containing p^k Z^rank;
    HNF of the lifted rows is a complete invariant.
    """
    from .intlat import hnf

    m = p**k
    rows = []
    for mat in mats:
        rows.extend([x % m for x in row] for row in mat)
    rows += [[m if i == j else 0 for j in range(rank)] for i in range(rank)]
    return tuple(tuple(r) for r in hnf(rows))


def is_admissible(mod: LocalBimodule) -> bool:
    """True iff the left and right images of the maximal ideal coincide."""
    left = _span_canonical([mod.left_pi], mod.p, mod.k, mod.rank)
    right = _span_canonical([mod.right_pi], mod.p, mod.k, mod.rank)
    return left == right


def bimodule_type(mod: LocalBimodule):
    """The pair (r, s), r + s = 2, from the residue quotient M / M*b."""
    if mod.rank != 8:
        raise ValueError("type classification needs rank 8")
    if not is_admissible(mod):
        raise ValueError("bimodule is not admissible")
    p, k, m = mod.p, mod.k, mod.m
    # quotient M / (M b): rows of right_pi span M b; compute the F_p quotient
    span = _span_canonical([mod.right_pi], p, k, mod.rank)
    # F_p-basis of M/(Mb + pM): reduce everything mod p
    red = [[x % p for x in row] for row in span]
    quotient_basis, proj = _fp_quotient(red, mod.rank, p)
    dim = len(quotient_basis)
    if dim != 4:
        raise ValueError(f"residue quotient has F_p-dimension {dim}, expected 4")
    # induced operators of left t and right t on the quotient
    A = _induced_operator(mod.left_t, quotient_basis, proj, p)
    Bq = _induced_operator(mod.right_t, quotient_basis, proj, p)
    # untwisted part: ker(A - B); twisted part: ker(A + B)
    diff = [[(A[i][j] - Bq[i][j]) % p for j in range(dim)] for i in range(dim)]
    summ = [[(A[i][j] + Bq[i][j]) % p for j in range(dim)] for i in range(dim)]
    r2 = dim - _rank_fp(diff, p)
    s2 = dim - _rank_fp(summ, p)
    if r2 % 2 or s2 % 2 or r2 + s2 != 4:
        raise ValueError("residue quotient does not split into conjugate pairs")
    return (r2 // 2, s2 // 2)


def _fp_quotient(span_rows, rank, p):
    """Basis of F_p^rank / rowspan and the projection map data."""
    # echelonize the span
    rows = [r[:] for r in span_rows if any(r)]
    pivots = {}
    for row in rows:
        cur = row[:]
        for col, prow in pivots.items():
            if cur[col]:
                f = cur[col] * pow(prow[col], -1, p) % p
                cur = [(x - f * y) % p for x, y in zip(cur, prow)]
        piv = next((c for c in range(rank) if cur[c]), None)
        if piv is not None:
            inv = pow(cur[piv], -1, p)
            pivots[piv] = [(x * inv) % p for x in cur]
    free_cols = [c for c in range(rank) if c not in pivots]

    def project(vec):
        cur = [x % p for x in vec]
        for col, prow in pivots.items():
            if cur[col]:
                f = cur[col]
                cur = [(x - f * y) % p for x, y in zip(cur, prow)]
        return [cur[c] for c in free_cols]

    return free_cols, project


def _induced_operator(mat, free_cols, project, p):
    """Matrix of the action on the quotient, basis = images of free columns."""
    dim = len(free_cols)
    out = [[0] * dim for _ in range(dim)]
    n = len(mat)
    for bidx, col in enumerate(free_cols):
        vec = [mat[col][j] for j in range(n)]  # image of basis row e_col
        img = project(vec)
        for i in range(dim):
            out[bidx][i] = img[i] % p
    # rows of `out` are coordinates of images; transpose for operator form
    return [[out[j][i] for j in range(dim)] for i in range(dim)]


def _rank_fp(mat, p):
    work = [row[:] for row in mat]
    rank = 0
    n = len(work)
    cols = len(work[0]) if work else 0
    for col in range(cols):
        piv = next((r for r in range(rank, n) if work[r][col] % p), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv = pow(work[rank][col], -1, p)
        work[rank] = [(x * inv) % p for x in work[rank]]
        for r in range(n):
            if r != rank and work[r][col]:
                f = work[r][col]
                work[r] = [(x - f * y) % p for x, y in zip(work[r], work[rank])]
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# standard bimodules and the CM-reduction bimodule


def _left_mult_matrix(loc: LocalQuatOrder, g):
    """Row-convention matrix of x -> g * x on the rank-4 coordinates."""
    rows = []
    for b in loc.basis():
        img = loc.mul(g, b)
        rows.append(loc.coords(img))
    # rows[i] = coords(g * basis[i]); acting on coordinate rows from the right
    # needs the matrix with [i][j] = coefficient of basis[j] in g*basis[i]
    return rows


def _right_mult_matrix(loc: LocalQuatOrder, g):
    rows = []
    for b in loc.basis():
        img = loc.mul(b, g)
        rows.append(loc.coords(img))
    return rows


def _block_diag(blocks, m):
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i in range(len(b)):
            for j in range(len(b)):
                out[off + i][off + j] = b[i][j] % m
        off += len(b)
    return out


def regular_bimodule(p: int, k: int = 4) -> LocalBimodule:
    """O as a bimodule over itself (rank 4)."""
    loc = LocalQuatOrder(p, k)
    t = loc.embed_w(loc.w.gen())
    pi = loc.pi()
    return LocalBimodule(p, k, 4,
                         _left_mult_matrix(loc, t), _left_mult_matrix(loc, pi),
                         _right_mult_matrix(loc, t), _right_mult_matrix(loc, pi))


def ideal_bimodule(p: int, k: int = 4) -> LocalBimodule:
    """The maximal ideal b = Pi*O as a bimodule (rank 4).

    With basis f_i = Pi * e_i: the right action of g is f_i g = Pi (e_i g),
    plain right multiplication in the standard coordinates, while the left
    action twists: g Pi = Pi * tw(g) with tw(a + Pi b) = sigma(a) + Pi
    sigma(b), so g f_i = Pi (tw(g) e_i).
    """
    loc = LocalQuatOrder(p, k)
    t = loc.embed_w(loc.w.gen())
    pi = loc.pi()

    def tw(g):
        a, b = g
        return (loc.w.sigma(a), loc.w.sigma(b))

    return LocalBimodule(p, k, 4,
                         _left_mult_matrix(loc, tw(t)), _left_mult_matrix(loc, tw(pi)),
                         _right_mult_matrix(loc, t), _right_mult_matrix(loc, pi))


def direct_sum(a: LocalBimodule, b: LocalBimodule) -> LocalBimodule:
    if (a.p, a.k) != (b.p, b.k):
        raise ValueError("precision mismatch")
    m = a.m
    return LocalBimodule(a.p, a.k, a.rank + b.rank,
                         _block_diag([a.left_t, b.left_t], m),
                         _block_diag([a.left_pi, b.left_pi], m),
                         _block_diag([a.right_t, b.right_t], m),
                         _block_diag([a.right_pi, b.right_pi], m))


def cm_reduction_bimodule(p: int, twist: bool = False, k: int = 4) -> LocalBimodule:
    """The rank-8 bimodule O tensor_{O_L} O for a ramified quadratic O_L.

    O_L = Z_p[w] with w = Pi * u', N(u') square (twist=False, L = Q_p(sqrt p))
    or non-square (twist=True, the other ramified class).  The bimodule is
    O (x)_{O_L} O with outer left/right multiplications; {1, t} is an
    O_L-basis of O on the right factor, so the module is O + O with tags
    (x) 1 and (x) t.
    """
    if p == 2:
        raise ValueError("wild ramification unsupported")
    loc = LocalQuatOrder(p, k)
    w = loc.w
    m = p**k
    target = 1 if not twist else _nonresidue(p)
    uprime = w.unit_with_norm(target)
    # wgen = Pi * u' ; conjugation in O_L sends wgen -> -wgen
    wgen = (w.zero(), uprime)

    # element of M: (x, y) = x (x) 1 + y (x) t, x, y in O (rank 8 over Z/p^k)
    def decompose_right(c):
        """Write c in O as alpha + beta*t with alpha, beta in O_L = Z_p[wgen]."""
        # O_L has Z/p^k-basis {1, wgen}; O has basis {1, t, Pi, Pi t}.
        # 1 = 1, wgen = Pi u' -> the O_L-span of {1, t} is everything:
        # alpha + beta t with alpha = a + b wgen, beta = c' + d wgen.
        # Solve linearly in the 4-dim coordinates.
        u0, u1 = uprime
        # wgen = Pi*(u0 + u1 t) has coords (0, 0, u0, u1)
        # wgen * t = Pi*(u0 t + u1 t^2)= Pi*(r u1 + u0 t): coords (0,0,r u1,u0)
        r = w.r
        mat = [
            [1, 0, 0, 0],        # 1
            [0, 0, u0, u1],      # wgen
            [0, 1, 0, 0],        # t
            [0, 0, r * u1 % m, u0],  # wgen * t
        ]
        sol = _solve_mod(mat, list(c), p, k)
        a, b, cc, d = sol
        return (w.scalar(a), (0, 0)), (w.scalar(cc), (0, 0)), b, d

    # right action of g on (x (x) 1, y (x) t):
    #   (x (x) 1) g = x g0 (x) 1 + x g1 (x) t         for g = g0 + g1 t over O_L
    #   (y (x) t) g = y (t g) = y (sigma_L(g0') ... )  handled via t*g = g~ *t
    # with t * (a + b t) for a,b in O_L: t a = sigma_L(a) t (since t wgen = -wgen t)
    # so (y (x) t) g with g = g0 + g1 t: t g = sigma(g0) t + sigma(g1) t^2
    #   = r sigma(g1) + sigma(g0) t, giving y r sigma(g1) (x) 1 + y sigma(g0) (x) t.
    def right_action_matrix(g):
        g0_a, g0_b, g1coefA, g1coefB = None, None, None, None
        # decompose g = g0 + g1 t with g0, g1 in O_L
        parts = decompose_right(loc.coords(g))
        # parts gives alpha = a + b wgen, beta = c + d wgen as scalars a, c and
        # multipliers b, d of wgen
        (a_s, _z1), (c_s, _z2), bmul, dmul = parts
        a = a_s[0]
        c = c_s[0]
        g0 = loc.add(loc.embed_w(w.scalar(a)), _scale_elt(loc, bmul, (w.zero(), uprime)))
        g1 = loc.add(loc.embed_w(w.scalar(c)), _scale_elt(loc, dmul, (w.zero(), uprime)))
        sg0 = _sigma_L(loc, g0, uprime)
        sg1 = _sigma_L(loc, g1, uprime)
        rows = []
        basis8 = [(b, 0) for b in loc.basis()] + [(b, 1) for b in loc.basis()]
        for (e, tag) in basis8:
            if tag == 0:
                xg0 = loc.mul(e, g0)
                xg1 = loc.mul(e, g1)
                rows.append(loc.coords(xg0) + loc.coords(xg1))
            else:
                y_r_sg1 = loc.mul(e, _scale_elt(loc, w.r, sg1))
                y_sg0 = loc.mul(e, sg0)
                rows.append(loc.coords(y_r_sg1) + loc.coords(y_sg0))
        return [[x % m for x in row] for row in rows]

    def left_action_matrix(g):
        rows = []
        basis8 = [(b, 0) for b in loc.basis()] + [(b, 1) for b in loc.basis()]
        for (e, tag) in basis8:
            img = loc.mul(g, e)
            co = loc.coords(img)
            if tag == 0:
                rows.append(co + [0, 0, 0, 0])
            else:
                rows.append([0, 0, 0, 0] + co)
        return rows

    t_elt = loc.embed_w(w.gen())
    pi_elt = loc.pi()
    return LocalBimodule(p, k, 8,
                         left_action_matrix(t_elt), left_action_matrix(pi_elt),
                         right_action_matrix(t_elt), right_action_matrix(pi_elt))


def _scale_elt(loc: LocalQuatOrder, s: int, x):
    return (_wscale(loc.w, s, x[0]), _wscale(loc.w, s, x[1]))


def _sigma_L(loc: LocalQuatOrder, g, uprime):
    """Conjugation of O_L = Z_p[Pi u'] applied to g = g0 + g1 * t? No:
    here g is itself in O_L (a Z/p^k-combination of 1 and wgen); sigma sends
    wgen to -wgen, i.e. fixes the scalar part and negates the wgen part."""
    # decompose g = a + b * wgen: coords (a, 0, b u0, b u1)
    co = loc.coords(g)
    u0, u1 = uprime
    m = loc.m
    if u0 % loc.p:
        b = (co[2] * pow(u0, -1, m)) % m
    else:
        b = (co[3] * pow(u1, -1, m)) % m
    a = co[0]
    if (co[1] % m, (co[2] - b * u0) % m, (co[3] - b * u1) % m) != (0, 0, 0):
        raise ValueError("element is not in O_L")
    # a - b*wgen
    neg = [(a) % m, 0, (-b * u0) % m, (-b * u1) % m]
    return loc.from_coords(neg)


def _solve_mod(mat, target, p, k):
    """Solve x * mat == target over Z/p^k for unimodular-enough mat."""
    m = p**k
    n = len(mat)
    aug = [[mat[i][j] for j in range(n)] for i in range(n)]
    det = frac_det(aug)
    deti = int(det) % m
    if deti % p == 0:
        raise ValueError("matrix not invertible mod p")
    # adjugate solve via fraction-free elimination mod m: use python ints
    inv = _mat_inverse_mod(aug, p, k)
    return [sum(target[t] * inv[t][j] for t in range(n)) % m for j in range(n)]


def _mat_inverse_mod(mat, p, k):
    m = p**k
    n = len(mat)
    work = [[mat[i][j] % m for j in range(n)] + [1 if i == j else 0 for j in range(n)]
            for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if work[r][col] % p)
        work[col], work[piv] = work[piv], work[col]
        inv = pow(work[col][col], -1, m)
        work[col] = [(x * inv) % m for x in work[col]]
        for r in range(n):
            if r != col and work[r][col]:
                f = work[r][col]
                work[r] = [(x - f * y) % m for x, y in zip(work[r], work[col])]
    return [row[n:] for row in work]
