"""Constructors for h-nodes, SCP instances, the grid approximation and the stability criterion."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..syntax import classical as C
from ..syntax.analysis import formula_bounds, free_vars, substitute
from ..syntax.ast import Affine, Atomic, Condition, HNode, Inf, Max, Min, Num, Signature, Sup, UnaryPL, Var, children
from ..syntax.pl import PLFunc, is_nondecreasing, is_nonincreasing, pl_fixed_point, rat
from .classify import is_classical_palyutin, is_palyutin

NONDECREASING = "nondecreasing"
NONINCREASING = "nonincreasing"


class FragmentError(ValueError):
    """An argument falls outside the fragment or monotonicity class a constructor needs."""


def mk_h_node(var: str, D: PLFunc, phi, psi) -> HNode:
    if not is_nonincreasing(D):
        raise FragmentError("the h-node connective must be nonincreasing")
    for name, g in (("phi", phi), ("psi", psi)):
        if not is_palyutin(g):
            raise FragmentError(f"{name} is not a Palyutin formula: {g}")
    return HNode(var, D, pl_fixed_point(D), phi, psi)


def _inf_all(xs, body):
    for x in reversed(xs):
        body = Inf(x, body)
    return body


def _sup_all(ys, body):
    for y in reversed(ys):
        body = Sup(y, body)
    return body


def mk_scp_instance(phi, psis, Ds, monotonicity: str = NONDECREASING, xs=("x",)) -> Condition:
    """The SCP condition for phi, psi_1..psi_n and connectives D_1..D_n (n >= 2).

    The sentence is sup_y (inf_x max(phi, D_1 psi_1, ...) - max_j inf_x max(phi, D_j psi_j))
    with threshold 0, where y lists the remaining free variables in sorted order.
    """
    psis, Ds, xs = tuple(psis), tuple(Ds), tuple(xs)
    if len(psis) < 2:
        raise FragmentError("an SCP instance needs at least two formulas psi_j")
    if len(Ds) != len(psis):
        raise FragmentError(f"{len(psis)} formulas but {len(Ds)} connectives")
    if monotonicity not in (NONDECREASING, NONINCREASING):
        raise FragmentError(f"unknown monotonicity flag {monotonicity!r}")
    mono = is_nondecreasing if monotonicity == NONDECREASING else is_nonincreasing
    for j, D in enumerate(Ds, 1):
        if not mono(D):
            raise FragmentError(f"D_{j} is not {monotonicity}")
    for name, g in [("phi", phi)] + [(f"psi_{j}", g) for j, g in enumerate(psis, 1)]:
        if not is_palyutin(g):
            raise FragmentError(f"{name} is not a Palyutin formula: {g}")
    applied = [UnaryPL(D, g) for D, g in zip(Ds, psis)]
    joint = _inf_all(xs, Max((phi, *applied)))
    split = Max(tuple(_inf_all(xs, Max((phi, a))) for a in applied))
    ys = sorted(free_vars(joint) | free_vars(split))
    body = Affine((Fraction(1), Fraction(-1)), Fraction(0), (joint, split))
    return Condition(_sup_all(ys, body), Fraction(0))


def mk_scp_instance_classical(phi, psis, xs=("x",)):
    """forall y. ((forall x. phi -> psi_1 | ... | psi_n) -> (forall x. phi -> psi_1) | ...)."""
    psis, xs = tuple(psis), tuple(xs)
    if not psis:
        raise FragmentError("a classical SCP instance needs at least one formula psi_k")
    for name, g in [("phi", phi)] + [(f"psi_{k}", g) for k, g in enumerate(psis, 1)]:
        if not is_classical_palyutin(g):
            raise FragmentError(f"{name} is not a classical Palyutin formula: {g}")

    def forall_x(body):
        for x in reversed(xs):
            body = C.Forall(x, body)
        return body

    premise = forall_x(C.Implies(phi, C.disj(psis)))
    conclusion = C.disj([forall_x(C.Implies(phi, g)) for g in psis])
    out = C.Implies(premise, conclusion)
    for y in sorted(C.cfree_vars(out), reverse=True):
        out = C.Forall(y, out)
    return out


@dataclass(frozen=True)
class ApproxGrid:
    """Thresholds r_0 < ... < r_k spaced by eps, helpers psi_i and margins lambda_i > 0."""

    eps: Fraction
    thresholds: tuple
    helpers: tuple
    margins: tuple

    def __post_init__(self):
        object.__setattr__(self, "eps", rat(self.eps))
        object.__setattr__(self, "thresholds", tuple(rat(r) for r in self.thresholds))
        object.__setattr__(self, "helpers", tuple(self.helpers))
        object.__setattr__(self, "margins", tuple(rat(m) for m in self.margins))
        rs = self.thresholds
        k = len(rs) - 1
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        if k < 1:
            raise ValueError("a grid needs at least two thresholds")
        for i in range(k):
            if rs[i + 1] - rs[i] != self.eps:
                raise ValueError(f"thresholds r_{i} = {rs[i]} and r_{i + 1} = {rs[i + 1]} are not eps apart")
        if len(self.helpers) != k or len(self.margins) != k:
            raise ValueError(f"expected {k} helpers and margins, got {len(self.helpers)} and {len(self.margins)}")
        if any(m <= 0 for m in self.margins):
            raise ValueError("margins must be positive")

    @property
    def k(self) -> int:
        return len(self.thresholds) - 1


def affine_grid(phi, eps, signature: Signature, margin=None) -> ApproxGrid:
    """The grid with psi_i = phi - r_i and lambda_i = eps/2 (or ``margin``).

    Thresholds are multiples of eps covering the static bounds of phi.
    """
    eps = rat(eps)
    lo, hi = formula_bounds(phi, signature)
    first = (lo / eps).__floor__()
    last = max((hi / eps).__ceil__(), first + 1)
    rs = [eps * i for i in range(first, last + 1)]
    helpers = [Affine((Fraction(1),), -r, (phi,)) for r in rs[:-1]]
    lam = eps / 2 if margin is None else rat(margin)
    return ApproxGrid(eps, rs, helpers, [lam] * (len(rs) - 1))


def approximate_by_grid(phi, grid: ApproxGrid):
    """theta = max_i max(r_0, min(r_{i+1}, ((r_{i+1} - r_0)/lambda_i) psi_i + r_0)).

    Each clamp is a single nondecreasing PL connective applied to psi_i. The
    caller is responsible for the two entailments the construction relies on:
    phi <= r_i forces psi_i <= 0, and psi_i <= lambda_i forces phi < r_{i+1}.
    ``phi`` itself does not enter the result.
    """
    rs = grid.thresholds
    thetas = []
    for i, (psi, lam) in enumerate(zip(grid.helpers, grid.margins)):
        C_i = PLFunc.clamp_affine((rs[i + 1] - rs[0]) / lam, rs[0], rs[0], rs[i + 1])
        thetas.append(UnaryPL(C_i, psi))
    return thetas[0] if len(thetas) == 1 else Max(tuple(thetas))


def eliminate_inf_step(theta, gamma, D: PLFunc, eps, bounds, var: str = "y"):
    """A B-combination of Palyutin formulas approximating inf_var max(theta, D gamma).

    ``bounds`` = (r_0, r_k) must enclose the target and span a multiple of eps.
    With rho_i = r_i + eps/2 the helpers are
    max(inf theta - r_i, min(rho_i - inf theta, inf max(theta, D gamma, rho_i) - rho_i)),
    all with margin eps/6, fed to :func:`approximate_by_grid`.
    """
    if not is_nondecreasing(D):
        raise FragmentError("D must be nondecreasing")
    for name, g in (("theta", theta), ("gamma", gamma)):
        if not is_palyutin(g):
            raise FragmentError(f"{name} is not a Palyutin formula: {g}")
    eps = rat(eps)
    r0, rk = rat(bounds[0]), rat(bounds[1])
    if eps <= 0:
        raise ValueError("eps must be positive")
    steps = (rk - r0) / eps
    if steps.denominator != 1 or steps < 1:
        raise ValueError("r_k - r_0 must be a positive multiple of eps")
    rs = [r0 + eps * i for i in range(int(steps) + 1)]
    lam = eps / 6
    one, neg = (Fraction(1),), (Fraction(-1),)
    inf_theta = Inf(var, theta)
    dgamma = UnaryPL(D, gamma)
    helpers = []
    for r in rs[:-1]:
        rho = r + eps / 2
        capped = Inf(var, Max((theta, dgamma, Num(rho))))
        helpers.append(
            Max((
                Affine(one, -r, (inf_theta,)),
                Min((Affine(neg, rho, (inf_theta,)), Affine(one, -rho, (capped,)))),
            ))
        )
    target = Inf(var, Max((theta, dgamma)))
    return approximate_by_grid(target, ApproxGrid(eps, rs, helpers, [lam] * len(helpers)))


def _default_signature(f) -> Signature:
    # predicates in [0, 1] as in the default symbol declaration
    preds = {}

    def walk(g):
        if isinstance(g, Atomic):
            preds[g.pred] = len(g.args)
        for c in children(g):
            walk(c)

    walk(f)
    return Signature.build(predicates=preds)


def stability_criterion(phi, x: str = "x", y: str = "y", z: str = "z", signature: Signature | None = None) -> Condition:
    """sup_y sup_z (sup_x |phi(x,y) - phi(x,z)| - inf_x max(phi(x,y), phi(x,z))) <= 0.

    phi must be Palyutin, nonnegative and free in at most x and y.
    """
    if not is_palyutin(phi):
        raise FragmentError(f"not a Palyutin formula: {phi}")
    extra = free_vars(phi) - {x, y}
    if extra:
        raise FragmentError(f"phi has free variables outside {x}, {y}: {sorted(extra)}")
    if len({x, y, z}) != 3:
        raise FragmentError("the variables x, y, z must be distinct")
    lo, _ = formula_bounds(phi, signature or _default_signature(phi))
    if lo < 0:
        raise FragmentError(f"phi may take negative values (lower bound {lo}); shift it with max(phi - r, 0)")
    phi_y = phi
    phi_z = substitute(phi, y, Var(z))
    one, minus = Fraction(1), Fraction(-1)
    diff = Affine((one, minus), Fraction(0), (phi_y, phi_z))
    rdiff = Affine((minus, one), Fraction(0), (phi_y, phi_z))
    spread = Sup(x, Max((diff, rdiff)))
    floor = Inf(x, Max((phi_y, phi_z)))
    body = Affine((one, minus), Fraction(0), (spread, floor))
    return Condition(Sup(y, Sup(z, body)), Fraction(0))
