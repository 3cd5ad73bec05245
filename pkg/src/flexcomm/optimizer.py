"""Concentration-based immune-network search over integer-encoded partitions.

Each cell's genome has one entry per node naming a companion node; decoding
takes connected components of those links, so a genome encodes a partition
without fixing the number of communities. Cells are cloned and hypermutated
(replacement values biased toward nodes sharing neighbors with the locus),
the best of each family survives, concentrations rise with fitness and are
suppressed when a cell resembles a better one; a cell whose concentration
reaches zero is dropped. Runs are reproducible bit-for-bit from the seed:
every clone draws from its own seed-derived stream, so evaluation order
cannot change results.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .fitness import Partition
from .graph import Graph
from .metrics import nmi_disjoint


@dataclass(frozen=True)
class OptimizerConfig:
    """Search parameters; defaults follow the benchmark protocol."""

    sigma_s: float = 0.2
    max_iterations: int = 1500
    alpha_ini: float = 10.0
    alpha_end: float = 1.0
    initial_population: int = 4
    max_population: int = 6
    clones_per_cell: int = 4
    suppression_rate: float = 0.3
    concentration_gain: float = 0.1
    rng_seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.sigma_s <= 1.0:
            raise ValueError(f"sigma_s must be in [0, 1], got {self.sigma_s}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not self.alpha_ini >= self.alpha_end >= 1.0:
            raise ValueError("need alpha_ini >= alpha_end >= 1")
        if not 1 <= self.initial_population <= self.max_population:
            raise ValueError("need 1 <= initial_population <= max_population")
        if self.clones_per_cell < 1:
            raise ValueError("clones_per_cell must be >= 1")
        if self.suppression_rate < 0 or self.concentration_gain < 0:
            raise ValueError("rates must be non-negative")


class Cell:
    """One candidate solution: integer genome, fitness, concentration."""

    __slots__ = ("genome", "fitness", "concentration", "_partition")

    def __init__(self, genome: np.ndarray, fitness: float = math.nan,
                 concentration: float = 0.5):
        genome = np.asarray(genome, dtype=np.int64)
        if genome.ndim != 1 or genome.size == 0:
            raise ValueError("genome must be a non-empty 1-d integer array")
        if ((genome < 0) | (genome >= genome.size)).any():
            raise ValueError("genome entries must be valid node indices")
        if not 0.0 <= concentration <= 1.0:
            raise ValueError("concentration must be in [0, 1]")
        genome = genome.copy()
        genome.flags.writeable = False
        self.genome = genome
        self.fitness = fitness
        self.concentration = concentration
        self._partition = None

    @property
    def partition(self) -> Partition:
        if self._partition is None:
            self._partition = decode(self.genome)
        return self._partition

    def __repr__(self) -> str:
        return f"Cell(fitness={self.fitness:.4f}, concentration={self.concentration:.3f})"


def decode(genome: Sequence[int] | np.ndarray) -> Partition:
    """Partition = connected components of the links {i, genome[i]}."""
    genome = np.asarray(genome, dtype=np.int64)
    n = genome.size
    if ((genome < 0) | (genome >= n)).any():
        raise ValueError("genome entries must be valid node indices")
    parent = list(range(n))

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for i in range(n):
        ri, rj = find(i), find(int(genome[i]))
        if ri != rj:
            parent[rj] = ri
    return Partition(find(i) for i in range(n))


def encode(p: Partition) -> np.ndarray:
    """Canonical genome for a partition: every member links to the smallest
    node of its community. decode(encode(p)) == p."""
    genome = np.empty(p.node_count, dtype=np.int64)
    for comm in p.communities:
        anchor = min(comm)
        for node in comm:
            genome[node] = anchor
    return genome


# -- hypermutation -----------------------------------------------------------

class MutationTable:
    """Per-node replacement candidates and cumulative sampling weights.

    The weight of candidate k at locus i is the shared-neighbor count
    |N(i) & N(k)|, with i's own neighbors always eligible at weight >= 1.
    Loci with no candidates (isolated nodes) keep their own index.
    """

    __slots__ = ("candidates", "cumweights")

    def __init__(self, g: Graph):
        self.candidates: list[np.ndarray] = []
        self.cumweights: list[np.ndarray] = []
        for i in range(g.node_count):
            weights: dict[int, int] = {}
            for j in g.adjacency[i]:
                for k in g.adjacency[j]:
                    if k != i:
                        weights[k] = weights.get(k, 0) + 1
            for j in g.adjacency[i]:
                weights[j] = max(weights.get(j, 0), 1)
            if weights:
                cand = np.fromiter(sorted(weights), count=len(weights), dtype=np.int64)
                w = np.array([weights[int(k)] for k in cand], dtype=np.float64)
                self.candidates.append(cand)
                self.cumweights.append(np.cumsum(w))
            else:
                self.candidates.append(np.array([i], dtype=np.int64))
                self.cumweights.append(np.array([1.0]))

    def draw(self, i: int, rng: np.random.Generator) -> int:
        cum = self.cumweights[i]
        idx = int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))
        return int(self.candidates[i][min(idx, len(cum) - 1)])


def sample_replacement_value(g: Graph, position: int, rng: np.random.Generator,
                             table: MutationTable | None = None) -> int:
    """Draw the new genome value for ``position`` with probability
    proportional to the shared-neighbor weight."""
    if table is None:
        table = MutationTable(g)
    return table.draw(position, rng)


def hypermutate(cell: Cell, g: Graph, n_mut: int, rng: np.random.Generator,
                table: MutationTable | None = None) -> Cell:
    """Clone ``cell`` and redraw the values of ``n_mut`` uniformly chosen loci.

    The parent is untouched; the clone inherits its concentration and has no
    fitness until evaluated.
    """
    if n_mut < 1:
        raise ValueError("n_mut must be >= 1")
    if table is None:
        table = MutationTable(g)
    genome = cell.genome.copy()
    n = genome.size
    positions = rng.choice(n, size=min(n_mut, n), replace=False)
    for pos in positions:
        genome[pos] = table.draw(int(pos), rng)
    return Cell(genome, concentration=cell.concentration)


def mutation_budget(cell: Cell, iteration: int, config: OptimizerConfig,
                    f_hat: float) -> int:
    """Loci to mutate: shrinks with normalized fitness and concentration and
    follows a linear intensity ramp from alpha_ini to alpha_end."""
    if not 0 <= iteration < config.max_iterations:
        raise ValueError("iteration out of range")
    frac = iteration / config.max_iterations
    intensity = config.alpha_ini + (config.alpha_end - config.alpha_ini) * frac
    return max(1, _round_half_up(intensity * (1.0 - f_hat * cell.concentration)))


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


# -- population dynamics ------------------------------------------------------

def suppress(population: list[Cell], sigma_s: float,
             suppression_rate: float) -> list[Cell]:
    """Reduce the concentration of cells too similar to better ones.

    Similarity is the disjoint NMI of the decoded partitions. "Better" means
    strictly higher fitness, with population order breaking exact ties so
    duplicated solutions still suppress each other. Cells at concentration
    <= 0 are dropped; the best cell always survives.
    """
    if len(population) <= 1:
        return list(population)
    drops = [0.0] * len(population)
    for wi, worse in enumerate(population):
        for bi, better in enumerate(population):
            if bi == wi:
                continue
            if (better.fitness, -bi) <= (worse.fitness, -wi):
                continue
            similarity = nmi_disjoint(worse.partition, better.partition)
            if similarity > sigma_s:
                drops[wi] += suppression_rate * similarity
    survivors = []
    best_idx = max(range(len(population)), key=lambda k: (population[k].fitness, -k))
    for idx, cell in enumerate(population):
        cell.concentration = max(0.0, cell.concentration - drops[idx])
        if cell.concentration > 0.0 or idx == best_idx:
            if idx == best_idx and cell.concentration <= 0.0:
                cell.concentration = 1e-9
            survivors.append(cell)
    return survivors


def _normalized_fitness(population: list[Cell]) -> list[float]:
    fits = [c.fitness for c in population]
    lo, hi = min(fits), max(fits)
    if hi == lo:
        return [1.0] * len(population)
    return [(f - lo) / (hi - lo) for f in fits]


@dataclass
class RunResult:
    """Best cell ever observed plus per-iteration progress."""

    best: Cell
    best_partition: Partition
    history: list[tuple[int, float, int]] = field(default_factory=list)
    evaluations: int = 0


def _stream(seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(
        np.random.SeedSequence(entropy=seed, spawn_key=key)))


def _random_cell(g: Graph, objective, rng: np.random.Generator) -> Cell:
    """Fresh cell whose every locus links to a random neighbor (or itself)."""
    genome = np.empty(g.node_count, dtype=np.int64)
    for i in range(g.node_count):
        options = sorted(g.adjacency[i] | {i})
        genome[i] = options[rng.integers(len(options))]
    cell = Cell(genome, concentration=0.5)
    cell.fitness = objective(cell.partition)
    return cell


def _weighted_cell(g: Graph, objective, rng: np.random.Generator,
                   table: MutationTable) -> Cell:
    """Fresh cell drawn from the shared-neighbor weights, so it decodes to a
    triangle-cohesive partition rather than a near-random one."""
    genome = np.fromiter((table.draw(i, rng) for i in range(g.node_count)),
                         count=g.node_count, dtype=np.int64)
    cell = Cell(genome, concentration=0.5)
    cell.fitness = objective(cell.partition)
    return cell


def _initial_population(g: Graph, objective, config: OptimizerConfig) -> list[Cell]:
    return [_random_cell(g, objective, _stream(config.rng_seed, 0, ci))
            for ci in range(config.initial_population)]


def run(g: Graph, objective: Callable[[Partition], float],
        config: OptimizerConfig = OptimizerConfig()) -> RunResult:
    """Evolve the population and return the best solution found.

    The returned history holds (iteration, best fitness so far, population
    size) per iteration. Identical graph, objective, and config reproduce
    identical output.
    """
    if g.node_count == 0:
        raise ValueError("graph has no nodes")
    table = MutationTable(g)
    population = _initial_population(g, objective, config)
    evaluations = len(population)
    best = max(population, key=lambda c: c.fitness)
    history: list[tuple[int, float, int]] = []

    for t in range(config.max_iterations):
        f_hats = _normalized_fitness(population)
        next_population = []
        for ci, cell in enumerate(population):
            n_clones = max(1, _round_half_up(cell.concentration * config.clones_per_cell))
            n_mut = mutation_budget(cell, t, config, f_hats[ci])
            family_best = cell
            for k in range(n_clones):
                rng = _stream(config.rng_seed, 1, t, ci, k)
                clone = hypermutate(cell, g, n_mut, rng, table)
                clone.fitness = objective(clone.partition)
                evaluations += 1
                # ties go to the clone: neutral drift over equivalent genomes
                if clone.fitness >= family_best.fitness:
                    family_best = clone
            next_population.append(family_best)
            if family_best.fitness > best.fitness:
                best = family_best
        population = next_population

        for cell, f_hat in zip(population, _normalized_fitness(population)):
            cell.concentration = min(1.0, cell.concentration
                                     + config.concentration_gain * f_hat)
        population = suppress(population, config.sigma_s, config.suppression_rate)
        # keep exploring: refill one newcomer per iteration below the cap,
        # alternating structured restarts with uniform ones
        if len(population) < config.max_population:
            rng = _stream(config.rng_seed, 2, t)
            if t % 4 == 3:
                newcomer = _random_cell(g, objective, rng)
            else:
                newcomer = _weighted_cell(g, objective, rng, table)
            evaluations += 1
            if newcomer.fitness > best.fitness:
                best = newcomer
            population.append(newcomer)
        history.append((t, best.fitness, len(population)))

    return RunResult(best=best, best_partition=best.partition,
                     history=history, evaluations=evaluations)
