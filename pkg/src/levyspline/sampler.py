"""Trans-dimensional sampler: birth/death/relocation moves plus Gibbs updates.

Move ratios use the prior as the birth proposal, so the birth acceptance
ratio collapses to lik-ratio * M_k/(J_k+1) * p_d/p_b, with the forced-birth
correction at the J_k = 0 boundary (the birth proposal probability there is
1, and the matching reverse-birth probability inside a death ratio at
J_k = 1 is likewise 1). Relocation proposes each knot uniformly between its
neighbors, an interval identical for the forward and reverse moves, so its
acceptance ratio is the bare likelihood ratio; the relocated atom's
coefficient is then re-drawn from its Normal full conditional.

Likelihoods are evaluated incrementally against cached fitted values; a
full-recompute mode rebuilds the fit from scratch at every evaluation and
is cross-checked in tests.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .bspline import KnotVector, basis_values, eval_mean
from .model import (
    Atom,
    Dataset,
    DegreeComponent,
    Hyperparams,
    ModelState,
    init_state,
    log_likelihood,
    sample_atom,
    sample_sigma2_prior,
)

BIRTH, DEATH, RELOCATE = "birth", "death", "relocate"
_TINY = 1e-300


def _log(x: float) -> float:
    return math.log(x) if x > 0 else -math.inf


@dataclass(frozen=True)
class ChainConfig:
    iterations: int
    burn_in: int = 0
    thin: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.iterations <= 0 or self.thin <= 0 or self.burn_in < 0:
            raise ValueError("iterations and thin must be positive, burn_in >= 0")
        if self.burn_in >= self.iterations:
            raise ValueError("burn_in must be smaller than iterations")
        if self.retained == 0:
            raise ValueError("config retains no samples")

    @property
    def retained(self) -> int:
        return (self.iterations - self.burn_in) // self.thin


@dataclass
class ChainOutput:
    """Thinned post-burn-in records plus per-move acceptance counters."""

    config: ChainConfig
    grid: np.ndarray | None
    curves: np.ndarray | None
    sigma2: np.ndarray
    J: dict[int, np.ndarray]
    M: dict[int, np.ndarray]
    attempts: dict[tuple[str, int], int]
    accepts: dict[tuple[str, int], int]
    states: list[ModelState] | None = None

    def __post_init__(self):
        for key, acc in self.accepts.items():
            if acc > self.attempts.get(key, 0):
                raise ValueError(f"accept count exceeds attempts for {key}")

    @property
    def retained(self) -> int:
        return len(self.sigma2)

    def acceptance_rates(self) -> dict[str, float]:
        rates = {}
        for (move, k), att in sorted(self.attempts.items()):
            rates[f"{move}_{k}"] = self.accepts[(move, k)] / att if att else float("nan")
        return rates


def choose_move(hyper: Hyperparams, J_k: int, rng: np.random.Generator) -> str:
    """Birth is forced while the component is empty; otherwise (p_b, p_d, p_w)."""
    if J_k == 0:
        return BIRTH
    pb, pd, _ = hyper.move_probs
    u = rng.random()
    if u < pb:
        return BIRTH
    if u < pb + pd:
        return DEATH
    return RELOCATE


class Chain:
    """Mutable sampler state with cached basis columns and fitted values."""

    def __init__(self, data: Dataset, hyper: Hyperparams, rng: np.random.Generator,
                 state: ModelState | None = None, prior_only: bool = False,
                 full_recompute: bool = False):
        self.data = data
        self.hyper = hyper
        self.rng = rng
        self.prior_only = prior_only
        self.full_recompute = full_recompute
        if state is None:
            state = init_state(data, hyper, rng)
        self.beta0 = state.beta0
        self.sigma2 = state.sigma2
        self.atoms: dict[int, list[Atom]] = {}
        self.M: dict[int, float] = {}
        self.phi: dict[int, float] = {}
        for k, comp in state.components.items():
            self.atoms[k] = list(comp.atoms)
            self.M[k] = comp.M
            self.phi[k] = comp.phi
        if set(self.atoms) != set(hyper.degrees):
            raise ValueError("state degrees do not match hyperparameter degrees")
        self.cols: dict[int, list[np.ndarray]] = {}
        self.fitted = None
        if not prior_only:
            self._rebuild_cache()

    # ---- caches -----------------------------------------------------------

    def _col(self, knots, k) -> np.ndarray:
        return basis_values(knots, k, self.data.x)

    def _rebuild_cache(self):
        self.cols = {
            k: [self._col(a.knots.knots, k) for a in atoms]
            for k, atoms in self.atoms.items()
        }
        fitted = np.full(self.data.n, self.beta0)
        for k, atoms in self.atoms.items():
            for a, col in zip(atoms, self.cols[k]):
                fitted += a.beta * col
        self.fitted = fitted

    def _refresh(self):
        if self.full_recompute and not self.prior_only:
            self._rebuild_cache()

    def _rss(self, resid: np.ndarray) -> float:
        return float(resid @ resid)

    def snapshot(self) -> ModelState:
        components = {
            k: DegreeComponent(degree=k, atoms=list(atoms), M=self.M[k], phi=self.phi[k])
            for k, atoms in self.atoms.items()
        }
        return ModelState(beta0=self.beta0, components=components, sigma2=self.sigma2)

    def mean_on(self, grid: np.ndarray) -> np.ndarray:
        out = np.full(len(grid), self.beta0)
        for k, atoms in self.atoms.items():
            for a in atoms:
                out += a.beta * basis_values(a.knots.knots, k, grid)
        return out

    # ---- reversible-jump moves -------------------------------------------

    def birth(self, k: int) -> tuple[bool, float]:
        self._refresh()
        atoms = self.atoms[k]
        J = len(atoms)
        atom = sample_atom(k, self.phi[k], self.data.domain, self.rng)
        pb, pd, _ = self.hyper.move_probs
        proposal_pb = 1.0 if J == 0 else pb
        if self.prior_only:
            llr, col = 0.0, None
        else:
            col = self._col(atom.knots.knots, k)
            resid = self.data.y - self.fitted
            llr = -(self._rss(resid - atom.beta * col) - self._rss(resid)) \
                / (2.0 * self.sigma2)
        log_ratio = llr + _log(self.M[k]) - math.log(J + 1) + _log(pd) - _log(proposal_pb)
        accepted = math.log(self.rng.random() + _TINY) < log_ratio
        if accepted:
            atoms.append(atom)
            if not self.prior_only:
                self.cols[k].append(col)
                self.fitted = self.fitted + atom.beta * col
        return accepted, log_ratio

    def death(self, k: int) -> tuple[bool, float]:
        self._refresh()
        atoms = self.atoms[k]
        J = len(atoms)
        if J == 0:
            raise RuntimeError("death move attempted on an empty component")
        r = int(self.rng.integers(J))
        atom = atoms[r]
        pb, pd, _ = self.hyper.move_probs
        reverse_pb = 1.0 if J == 1 else pb
        if self.prior_only:
            llr = 0.0
        else:
            col = self.cols[k][r]
            resid = self.data.y - self.fitted
            llr = -(self._rss(resid + atom.beta * col) - self._rss(resid)) \
                / (2.0 * self.sigma2)
        log_ratio = llr + math.log(J) - _log(self.M[k]) + _log(reverse_pb) - _log(pd)
        accepted = math.log(self.rng.random() + _TINY) < log_ratio
        if accepted:
            atoms.pop(r)
            if not self.prior_only:
                col = self.cols[k].pop(r)
                self.fitted = self.fitted - atom.beta * col
        return accepted, log_ratio

    def relocate(self, k: int) -> list[bool]:
        atoms = self.atoms[k]
        J = len(atoms)
        if J == 0:
            raise RuntimeError("relocation attempted on an empty component")
        r = int(self.rng.integers(J))
        atom = atoms[r]
        beta = atom.beta
        knots = list(atom.knots.knots)
        lo_bound, hi_bound = self.data.domain
        flags = []
        col = None if self.prior_only else self.cols[k][r]
        for i in range(k + 2):
            self._refresh()
            if self.full_recompute and not self.prior_only:
                col = self.cols[k][r]
            lo = knots[i - 1] if i > 0 else lo_bound
            hi = knots[i + 1] if i < k + 1 else hi_bound
            prop = float(self.rng.uniform(lo, hi))
            candidate = knots.copy()
            candidate[i] = prop
            if self.prior_only:
                llr = 0.0
                new_col = None
            else:
                new_col = self._col(candidate, k)
                resid = self.data.y - self.fitted
                llr = -(self._rss(resid + beta * (col - new_col)) - self._rss(resid)) \
                    / (2.0 * self.sigma2)
            accepted = math.log(self.rng.random() + _TINY) < llr
            if accepted:
                knots[i] = prop
                atoms[r] = Atom(knots=KnotVector(degree=k, knots=tuple(knots)), beta=beta)
                if not self.prior_only:
                    self.fitted = self.fitted + beta * (new_col - col)
                    col = new_col
                    self.cols[k][r] = new_col
            flags.append(accepted)
        self.gibbs_beta(k, r)
        return flags

    # ---- Gibbs updates ----------------------------------------------------

    def gibbs_beta(self, k: int, idx: int):
        self._refresh()
        atom = self.atoms[k][idx]
        phi = self.phi[k]
        if self.prior_only:
            new_beta = float(self.rng.normal(0.0, phi))
        else:
            col = self.cols[k][idx]
            ss = float(col @ col)
            var = 1.0 / (ss / self.sigma2 + 1.0 / phi**2)
            partial = (self.data.y - self.fitted) + atom.beta * col
            mean = var * float(partial @ col) / self.sigma2
            new_beta = float(self.rng.normal(mean, math.sqrt(var)))
            self.fitted = self.fitted + (new_beta - atom.beta) * col
        self.atoms[k][idx] = dataclasses.replace(atom, beta=new_beta)

    def gibbs_M(self, k: int):
        a = self.hyper.a_gamma[k] + len(self.atoms[k])
        b = self.hyper.b_gamma[k] + 1.0
        self.M[k] = max(float(self.rng.gamma(a, 1.0 / b)), _TINY)

    def gibbs_sigma2(self):
        if self.prior_only:
            self.sigma2 = sample_sigma2_prior(self.hyper, self.rng)
            return
        self._refresh()
        resid = self.data.y - self.fitted
        r, R, n = self.hyper.r, self.hyper.R, self.data.n
        r0 = r + n
        R0 = (self._rss(resid) + r * R) / r0
        g = self.rng.gamma(r0 / 2.0, 2.0 / max(r0 * R0, _TINY))
        self.sigma2 = 1.0 / max(g, _TINY)

    # ---- outer loop -------------------------------------------------------

    def move(self, k: int, counters=None) -> None:
        kind = choose_move(self.hyper, len(self.atoms[k]), self.rng)
        if kind == BIRTH:
            accepted, _ = self.birth(k)
        elif kind == DEATH:
            accepted, _ = self.death(k)
        else:
            flags = self.relocate(k)
            accepted = any(flags)
        if counters is not None:
            attempts, accepts = counters
            attempts[(kind, k)] = attempts.get((kind, k), 0) + 1
            accepts[(kind, k)] = accepts.get((kind, k), 0) + int(accepted)

    def sweep(self, counters=None, moves_per_degree: int = 1,
              beta_sweep: bool = False) -> None:
        for k in self.hyper.degrees:
            for _ in range(moves_per_degree):
                self.move(k, counters)
            self.gibbs_M(k)
        self.gibbs_sigma2()
        if beta_sweep:
            for k in self.hyper.degrees:
                for idx in range(len(self.atoms[k])):
                    self.gibbs_beta(k, idx)


# ---- functional surface used by tests and callers -------------------------


def birth_log_ratio(state: ModelState, k: int, atom: Atom, data: Dataset,
                    hyper: Hyperparams) -> float:
    """Log acceptance ratio for appending `atom` to component k (prior proposal)."""
    comp = state.components[k]
    J = comp.count
    pb, pd, _ = hyper.move_probs
    proposal_pb = 1.0 if J == 0 else pb
    proposed = _with_atoms(state, k, comp.atoms + [atom])
    llr = log_likelihood(proposed, data) - log_likelihood(state, data)
    return llr + _log(comp.M) - math.log(J + 1) + _log(pd) - _log(proposal_pb)


def death_log_ratio(state: ModelState, k: int, r: int, data: Dataset,
                    hyper: Hyperparams) -> float:
    """Log acceptance ratio for removing atom index r from component k."""
    comp = state.components[k]
    J = comp.count
    if J == 0:
        raise RuntimeError("death ratio undefined for an empty component")
    pb, pd, _ = hyper.move_probs
    reverse_pb = 1.0 if J == 1 else pb
    remaining = comp.atoms[:r] + comp.atoms[r + 1:]
    proposed = _with_atoms(state, k, remaining)
    llr = log_likelihood(proposed, data) - log_likelihood(state, data)
    return llr + math.log(J) - _log(comp.M) + _log(reverse_pb) - _log(pd)


def _with_atoms(state: ModelState, k: int, atoms: list[Atom]) -> ModelState:
    components = dict(state.components)
    old = components[k]
    components[k] = DegreeComponent(degree=k, atoms=list(atoms), M=old.M, phi=old.phi)
    return ModelState(beta0=state.beta0, components=components, sigma2=state.sigma2)


def _chain_for(state, data, hyper, rng, **kwargs) -> Chain:
    return Chain(data, hyper, rng, state=state, **kwargs)


def birth_step(state, k, data, hyper, rng, **kwargs):
    ch = _chain_for(state, data, hyper, rng, **kwargs)
    accepted, log_ratio = ch.birth(k)
    return ch.snapshot(), accepted, log_ratio


def death_step(state, k, data, hyper, rng, **kwargs):
    ch = _chain_for(state, data, hyper, rng, **kwargs)
    accepted, log_ratio = ch.death(k)
    return ch.snapshot(), accepted, log_ratio


def relocation_step(state, k, data, hyper, rng, **kwargs):
    ch = _chain_for(state, data, hyper, rng, **kwargs)
    flags = ch.relocate(k)
    return ch.snapshot(), flags


def gibbs_beta(state, k, atom_index, data, rng, hyper=None, **kwargs):
    hyper = hyper or Hyperparams.make(tuple(state.components))
    ch = _chain_for(state, data, hyper, rng, **kwargs)
    ch.gibbs_beta(k, atom_index)
    return ch.snapshot()


def gibbs_M(component: DegreeComponent, hyper: Hyperparams,
            rng: np.random.Generator) -> float:
    a = hyper.a_gamma[component.degree] + component.count
    b = hyper.b_gamma[component.degree] + 1.0
    return max(float(rng.gamma(a, 1.0 / b)), _TINY)


def gibbs_sigma2(state: ModelState, data: Dataset, hyper: Hyperparams,
                 rng: np.random.Generator) -> float:
    ch = _chain_for(state, data, hyper, rng)
    ch.gibbs_sigma2()
    return ch.sigma2


def run_chain(data: Dataset, hyper: Hyperparams, cfg: ChainConfig,
              grid: np.ndarray | None = None, prior_only: bool = False,
              full_recompute: bool = False, moves_per_degree: int = 1,
              beta_sweep: bool = False, store_curves: bool = True,
              keep_states: bool = False) -> ChainOutput:
    """Run the full sampler: init from the prior, sweep, retain thinned samples."""
    rng = np.random.default_rng(cfg.seed)
    chain = Chain(data, hyper, rng, prior_only=prior_only,
                  full_recompute=full_recompute)
    if grid is None:
        grid = data.x
    grid = np.asarray(grid, dtype=float)
    attempts: dict[tuple[str, int], int] = {}
    accepts: dict[tuple[str, int], int] = {}
    curves = [] if store_curves else None
    sigma2_trace = []
    J_trace = {k: [] for k in hyper.degrees}
    M_trace = {k: [] for k in hyper.degrees}
    states = [] if keep_states else None
    for it in range(cfg.iterations):
        chain.sweep((attempts, accepts), moves_per_degree=moves_per_degree,
                    beta_sweep=beta_sweep)
        if it >= cfg.burn_in and (it - cfg.burn_in) % cfg.thin == cfg.thin - 1:
            sigma2_trace.append(chain.sigma2)
            for k in hyper.degrees:
                J_trace[k].append(len(chain.atoms[k]))
                M_trace[k].append(chain.M[k])
            if store_curves:
                curves.append(chain.mean_on(grid))
            if keep_states:
                states.append(chain.snapshot())
    return ChainOutput(
        config=cfg,
        grid=grid if store_curves else None,
        curves=np.asarray(curves) if store_curves else None,
        sigma2=np.asarray(sigma2_trace),
        J={k: np.asarray(v, dtype=int) for k, v in J_trace.items()},
        M={k: np.asarray(v) for k, v in M_trace.items()},
        attempts=attempts,
        accepts=accepts,
        states=states,
    )


def posterior_curve(out: ChainOutput, grid: np.ndarray | None = None,
                    levels: tuple[float, float] = (0.025, 0.975)):
    """Pointwise posterior mean and empirical quantile band over retained samples."""
    if out.retained == 0:
        raise ValueError("no retained samples")
    if grid is None or (out.grid is not None and np.array_equal(grid, out.grid)):
        if out.curves is None:
            raise ValueError("chain output stored no curves")
        curves = out.curves
    elif out.states is not None:
        grid = np.asarray(grid, dtype=float)
        curves = np.asarray([eval_mean(s, grid) for s in out.states])
    else:
        raise ValueError("grid differs from the stored one and no states were kept")
    mean = curves.mean(axis=0)
    lower = np.quantile(curves, levels[0], axis=0)
    upper = np.quantile(curves, levels[1], axis=0)
    return mean, lower, upper
