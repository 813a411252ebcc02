"""Seeded generators for four MILP families.

All randomness flows through numpy's Philox bit generator, a counter-based
64-bit algorithm whose streams are fully determined by their integer key,
independent of platform. Element ``index`` of a seeded family uses the key
``seed + (index << 64)``, so any element of a stream can be produced
directly and two processes asking for the same (config, index) write
byte-identical LP files. A plain call with only ``seed`` equals stream
element 0.

Data is sampled as integers where the model allows it (costs, demands,
capacities, prices); the facility-location family also uses uniform unit
square coordinates, whose IEEE arithmetic is reproducible across
platforms.
"""

import inspect

import numpy as np

from .errors import GeneratorParameterError
from .problem import Constraint, Problem, Relation

_MAX_SEED = 2**64


def rng_for(seed, index=0):
    seed = int(seed)
    index = int(index)
    if not 0 <= seed < _MAX_SEED:
        raise GeneratorParameterError(f"seed must be in [0, 2^64), got {seed}")
    if not 0 <= index < _MAX_SEED:
        raise GeneratorParameterError(f"stream index must be in [0, 2^64), got {index}")
    return np.random.Generator(np.random.Philox(key=seed + (index << 64)))


def gen_set_cover(rows=500, cols=1000, density=0.05, max_cost=100, seed=0, index=0):
    """Random set-cover instance: min cost selection covering every row.

    Each row draws its covering columns without replacement, sized so the
    total fill matches ``density`` but never below two columns per row;
    columns left unused are repaired into a random row. Costs are uniform
    integers in [1, max_cost].

    Parameters
    ----------
    rows, cols : int
        Elements to cover and available sets.
    density : float
        Target fraction of nonzeros in the covering matrix, in (0, 1].
    max_cost : int
        Upper bound for the uniform integer column costs.
    seed, index : int
        Stream key and element index (see rng_for).
    """
    if rows < 1 or cols < 1:
        raise GeneratorParameterError("set_cover needs rows >= 1 and cols >= 1")
    if not 0 < density <= 1:
        raise GeneratorParameterError(f"density must be in (0, 1], got {density}")
    if max_cost < 1:
        raise GeneratorParameterError("max_cost must be >= 1")
    if density * cols < 2:
        raise GeneratorParameterError(
            f"density*cols = {density * cols:.3f} < 2: rows cannot get two covering columns"
        )
    rng = rng_for(seed, index)

    target = int(round(rows * cols * density))
    base, extra = divmod(target, rows)
    covers = []
    for i in range(rows):
        k = base + (1 if i < extra else 0)
        k = min(max(k, 2), cols)
        covers.append(np.sort(rng.choice(cols, size=k, replace=False)))

    used = np.zeros(cols, dtype=bool)
    for cover in covers:
        used[cover] = True
    for j in np.nonzero(~used)[0]:
        r = int(rng.integers(rows))
        covers[r] = np.unique(np.append(covers[r], j))

    costs = rng.integers(1, max_cost + 1, size=cols).astype(float)
    cons = [
        Constraint(indices=cover, coefs=np.ones(cover.size), relation=Relation.GE, rhs=1.0)
        for cover in covers
    ]
    return Problem(
        name=f"set_cover_{seed}_{index}",
        objective=costs,
        lower=np.zeros(cols),
        upper=np.ones(cols),
        is_integer=np.ones(cols, dtype=bool),
        rows=cons,
        maximize=False,
    )


def gen_comb_auction(items=100, bids=500, add_prob=0.02, price_lo=10, price_hi=30, seed=0, index=0):
    """Combinatorial auction: pick non-conflicting bids of maximum value.

    Bundle sizes are 1 + Binomial(items - 1, add_prob); each bid's price is
    its bundle size times a uniform integer unit value in
    [price_lo, price_hi], i.e. proportional to size with multiplicative
    noise. One conflict row per item that appears in at least one bid.
    Stored in minimized form (negated prices) with the original
    maximization sense recorded.
    """
    if items < 1 or bids < 1:
        raise GeneratorParameterError("comb_auction needs items >= 1 and bids >= 1")
    if not 0 <= add_prob <= 1:
        raise GeneratorParameterError(f"add_prob must be in [0, 1], got {add_prob}")
    if not 1 <= price_lo <= price_hi:
        raise GeneratorParameterError("need 1 <= price_lo <= price_hi")
    rng = rng_for(seed, index)

    bundles = []
    prices = np.empty(bids)
    for b in range(bids):
        size = 1 + int(rng.binomial(items - 1, add_prob)) if items > 1 else 1
        bundle = np.sort(rng.choice(items, size=size, replace=False))
        unit = int(rng.integers(price_lo, price_hi + 1))
        bundles.append(bundle)
        prices[b] = size * unit

    bids_per_item = [[] for _ in range(items)]
    for b, bundle in enumerate(bundles):
        for it in bundle:
            bids_per_item[it].append(b)
    cons = []
    for it in range(items):
        touching = bids_per_item[it]
        if touching:
            cons.append(
                Constraint(
                    indices=np.array(touching, dtype=np.int64),
                    coefs=np.ones(len(touching)),
                    relation=Relation.LE,
                    rhs=1.0,
                )
            )
    return Problem(
        name=f"comb_auction_{seed}_{index}",
        objective=-prices,
        lower=np.zeros(bids),
        upper=np.ones(bids),
        is_integer=np.ones(bids, dtype=bool),
        rows=cons,
        maximize=True,
    )


def gen_cap_facility(customers=100, facilities=100, ratio=5.0, seed=0, index=0):
    """Capacitated facility location with unit-demand assignment variables.

    Customers and facilities get uniform positions on the unit square.
    Integer demands are uniform in [5, 35] and raw capacities in [10, 160],
    then capacities are rescaled so total capacity equals ratio * total
    demand. Opening costs are sampled around sqrt(capacity); transport cost
    of serving customer i from facility j is 10 * demand_i * distance_ij.
    Variables: one binary open flag per facility, then one continuous
    assignment fraction x_ij in [0, 1] per (customer, facility) pair at
    index facilities + i * facilities + j. Rows: per customer an equality
    sum_j x_ij = 1, per facility sum_i demand_i x_ij - capacity_j y_j <= 0.
    """
    if customers < 1 or facilities < 1:
        raise GeneratorParameterError("cap_facility needs customers >= 1 and facilities >= 1")
    if ratio <= 0:
        raise GeneratorParameterError(f"ratio must be positive, got {ratio}")
    rng = rng_for(seed, index)

    demands = rng.integers(5, 36, size=customers).astype(float)
    caps_raw = rng.integers(10, 161, size=facilities).astype(float)
    caps = caps_raw * (ratio * demands.sum() / caps_raw.sum())
    open_cost = rng.integers(100, 111, size=facilities).astype(float) * np.sqrt(caps) + rng.integers(
        0, 91, size=facilities
    )
    cust_xy = rng.random((customers, 2))
    fac_xy = rng.random((facilities, 2))
    dx = cust_xy[:, None, 0] - fac_xy[None, :, 0]
    dy = cust_xy[:, None, 1] - fac_xy[None, :, 1]
    trans = 10.0 * demands[:, None] * np.sqrt(dx * dx + dy * dy)

    n = facilities + customers * facilities
    objective = np.concatenate([open_cost, trans.reshape(-1)])
    lower = np.zeros(n)
    upper = np.concatenate([np.ones(facilities), np.ones(customers * facilities)])
    is_integer = np.concatenate(
        [np.ones(facilities, dtype=bool), np.zeros(customers * facilities, dtype=bool)]
    )

    def x_index(i, j):
        return facilities + i * facilities + j

    cons = []
    for i in range(customers):
        idx = np.array([x_index(i, j) for j in range(facilities)], dtype=np.int64)
        cons.append(Constraint(indices=idx, coefs=np.ones(facilities), relation=Relation.EQ, rhs=1.0))
    for j in range(facilities):
        idx = np.array([x_index(i, j) for i in range(customers)] + [j], dtype=np.int64)
        coefs = np.concatenate([demands, [-caps[j]]])
        cons.append(Constraint(indices=idx, coefs=coefs, relation=Relation.LE, rhs=0.0))

    return Problem(
        name=f"cap_facility_{seed}_{index}",
        objective=objective,
        lower=lower,
        upper=upper,
        is_integer=is_integer,
        rows=cons,
        maximize=False,
    )


def gen_indep_set(n_nodes=100, graph="erdos_renyi", edge_prob=0.1, affinity=4, seed=0, index=0):
    """Maximum independent set on a random graph, edge-inequality model.

    Graphs: Erdos-Renyi (each pair independently an edge with edge_prob) or
    Barabasi-Albert preferential attachment (each new node links to
    ``affinity`` earlier nodes chosen by degree). One row x_u + x_v <= 1
    per edge, rows sorted lexicographically. Stored negated (maximization
    recorded on the Problem).
    """
    if n_nodes < 1:
        raise GeneratorParameterError("indep_set needs n_nodes >= 1")
    if graph not in ("erdos_renyi", "barabasi_albert"):
        raise GeneratorParameterError(f"graph must be erdos_renyi or barabasi_albert, got {graph!r}")
    rng = rng_for(seed, index)

    edges = []
    if graph == "erdos_renyi":
        if not 0 <= edge_prob <= 1:
            raise GeneratorParameterError(f"edge_prob must be in [0, 1], got {edge_prob}")
        for u in range(n_nodes):
            draws = rng.random(n_nodes - u - 1)
            for off in np.nonzero(draws < edge_prob)[0]:
                edges.append((u, u + 1 + int(off)))
    else:
        if not 1 <= affinity < n_nodes:
            raise GeneratorParameterError("barabasi_albert needs 1 <= affinity < n_nodes")
        degrees = np.zeros(n_nodes)
        for new in range(affinity, n_nodes):
            if new == affinity:
                neighbors = np.arange(affinity)
            else:
                prob = degrees[:new] / degrees[:new].sum()
                neighbors = rng.choice(new, size=affinity, replace=False, p=prob)
            for v in np.sort(neighbors):
                edges.append((int(v), new))
                degrees[v] += 1
                degrees[new] += 1
        edges.sort()

    cons = [
        Constraint(indices=np.array(e, dtype=np.int64), coefs=np.ones(2), relation=Relation.LE, rhs=1.0)
        for e in edges
    ]
    return Problem(
        name=f"indep_set_{seed}_{index}",
        objective=-np.ones(n_nodes),
        lower=np.zeros(n_nodes),
        upper=np.ones(n_nodes),
        is_integer=np.ones(n_nodes, dtype=bool),
        rows=cons,
        maximize=True,
    )


FAMILIES = {
    "set_cover": gen_set_cover,
    "comb_auction": gen_comb_auction,
    "cap_facility": gen_cap_facility,
    "indep_set": gen_indep_set,
}


def generate(family, seed=0, index=0, **params):
    """Dispatch to one family; unknown parameter names are rejected."""
    if family not in FAMILIES:
        raise GeneratorParameterError(
            f"unknown family {family!r}; choose from {sorted(FAMILIES)}"
        )
    fn = FAMILIES[family]
    allowed = set(inspect.signature(fn).parameters) - {"seed", "index"}
    unknown = set(params) - allowed
    if unknown:
        raise GeneratorParameterError(
            f"unknown {family} parameters {sorted(unknown)}; allowed: {sorted(allowed)}"
        )
    return fn(seed=seed, index=index, **params)


def stream(family, seed=0, count=None, **params):
    """Yield (index, Problem) pairs; element k is a pure function of
    (family, params, seed, k), so streams can be resumed anywhere."""
    k = 0
    while count is None or k < count:
        yield k, generate(family, seed=seed, index=k, **params)
        k += 1
