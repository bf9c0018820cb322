"""Randomized batteries that check the triangulated structure and the functor on generated instances."""
from __future__ import annotations

import logging
import random
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Mapping, Sequence

from bondcat import config
from bondcat.category import add, compose, identity, shift_object, validate_morphism, zero_morphism
from bondcat.complexes import mapping_cone, validate_chain_map, validate_complex
from bondcat.cones import (
    check_octahedron,
    check_rotation_commutativity,
    check_tr3_squares,
    cone,
    identity_cone_contraction,
    lambda_quotient_inverse,
    octahedron,
    rotation_witnesses,
    tr3_fill,
)
from bondcat.equiv import Variant, check_witness, find_witness, ideal_witness, random_morphism, random_null_morphism
from bondcat.errors import BondcatError
from bondcat.fixtures import algebra_a1, algebra_a2, algebra_a3, algebra_two_cycle
from bondcat.functor import check_additivity, check_cone_compat, check_faithful, check_homotopy_equiv, check_shift_compat
from bondcat.generator import (
    random_chain_map_instance,
    random_composable,
    random_morphism_between,
    random_object,
    random_poset,
    random_square,
)
from bondcat.oracle import brute_force_equivalent, generator_count
from bondcat.scalar import Field
from bondcat.schemas import BatterySummary, HarnessSummary

LOGGER = logging.getLogger(__name__)

ORACLE_LIMIT = 12

# (passed, note) per trial; note is counted in the battery's notes when set
TrialResult = tuple[bool, str | None]


def _identity_cone(rng: random.Random, field: Field) -> TrialResult:
    B = random_object(random_poset(rng, rng.randint(2, 4)), field, rng)
    omega = cone(identity(B))
    witness = identity_cone_contraction(B)
    return check_witness(identity(omega), zero_morphism(omega, omega), witness).valid, None


def _rotation(rng: random.Random, field: Field) -> TrialResult:
    T = random_morphism_between(random_poset(rng, rng.randint(2, 4)), field, rng)
    rotation = rotation_witnesses(T)
    omega = rotation.S.source
    ok = (
        compose(rotation.R, rotation.S) == identity(shift_object(T.source))
        and check_rotation_commutativity(T, rotation).valid
        and check_witness(identity(omega), compose(rotation.S, rotation.R), rotation.L_inv).valid
    )
    return ok, None


def _tr3(rng: random.Random, field: Field) -> TrialResult:
    square = random_square(random_poset(rng, rng.randint(2, 3)), field, rng, depth=1)
    H = tr3_fill(square.T, square.T2, square.F, square.G, square.L)
    ok = validate_morphism(H, "H").valid and check_tr3_squares(square.T, square.T2, square.F, square.G, H)
    return ok, None


def _octahedron(rng: random.Random, field: Field) -> TrialResult:
    S, T = random_composable(random_poset(rng, rng.randint(2, 3)), field, rng, depth=1)
    result = octahedron(S, T)
    ok = check_octahedron(S, T, result).valid and lambda_quotient_inverse(result) is not None
    return ok, None


def _ideal(rng: random.Random, field: Field) -> TrialResult:
    poset = random_poset(rng, rng.randint(2, 4))
    A, B, C, D = (random_object(poset, field, rng, depth=1) for _ in range(4))
    variant = rng.choice([Variant.K, Variant.PAIRED])
    F, L = random_null_morphism(B, C, rng, variant)
    G = random_morphism(C, D, rng)
    H = random_morphism(A, B, rng)
    right, right_plain = ideal_witness(F, L, G, "right")
    left, left_plain = ideal_witness(F, L, H, "left")
    FG, HF = compose(F, G), compose(H, F)
    ok = (
        check_witness(FG, zero_morphism(FG.source, FG.target), right).valid
        and check_witness(HF, zero_morphism(HF.source, HF.target), left).valid
    )
    return ok, None if right_plain and left_plain else "re-solved"


_ALGEBRAS = (algebra_a1, algebra_a2, algebra_a3, algebra_two_cycle)


def _functor(rng: random.Random, field: Field) -> TrialResult:
    algebra = rng.choice(_ALGEBRAS)()
    phi = random_chain_map_instance(algebra, field, rng, depth=1)
    built = mapping_cone(phi)
    ok = (
        validate_chain_map(phi).valid
        and validate_complex(built.cone).valid
        and check_cone_compat(phi).valid
        and check_shift_compat(phi.source, phi).valid
        and check_additivity(phi.source, phi.target).valid
        and check_faithful(phi).valid
    )
    return ok, None


def _homotopy_equiv(rng: random.Random, field: Field) -> TrialResult:
    algebra = rng.choice(_ALGEBRAS)()
    phi = random_chain_map_instance(algebra, field, rng, depth=1)
    report = check_homotopy_equiv(phi)
    if report.homotopic:
        return report.conversions_verified, "homotopic"
    return True, "plain-K-only" if report.k_plain else "not-homotopic"


def _oracle(rng: random.Random, field: Field) -> TrialResult:
    binary = Field(2)
    variant = rng.choice(list(Variant))
    for _ in range(20):
        poset = random_poset(rng, rng.randint(2, 3))
        source = random_object(poset, binary, rng, depth=1)
        target = random_object(poset, binary, rng, depth=1)
        S = random_morphism(source, target, rng)
        if generator_count(S, variant) <= ORACLE_LIMIT:
            break
    else:
        return True, "skipped"
    if rng.random() < 0.5:
        T = random_morphism(source, target, rng)
    else:
        null, _ = random_null_morphism(source, target, rng, variant)
        T = add(S, null)
    solved = find_witness(S, T, variant) is not None
    agreed = solved == brute_force_equivalent(S, T, variant)
    return agreed, "feasible" if solved else "infeasible"


BATTERIES: dict[str, Callable[[random.Random, Field], TrialResult]] = {
    "identity-cone": _identity_cone,
    "rotation": _rotation,
    "tr3": _tr3,
    "octahedron": _octahedron,
    "ideal": _ideal,
    "functor": _functor,
    "homotopy-equiv": _homotopy_equiv,
    "oracle": _oracle,
}

# Trial counts of the acceptance run, per battery.
ACCEPTANCE_TRIALS: dict[str, int] = {
    "identity-cone": 20,
    "rotation": 50,
    "tr3": 50,
    "octahedron": 30,
    "ideal": 30,
    "functor": 50,
    "homotopy-equiv": 100,
    "oracle": 200,
}


def trial_seed(seed: int, battery: str, trial: int) -> int:
    offset = list(BATTERIES).index(battery)
    return (seed * 1_000_003 + offset * 10_007 + trial) % (2**63)


def run_trial(battery: str, seed: int, trial: int, field_label: str) -> tuple[int, bool, str | None, str | None]:
    """One isolated trial; returns (trial, passed, note, error)."""
    rng = random.Random(trial_seed(seed, battery, trial))
    try:
        passed, note = BATTERIES[battery](rng, Field.parse(field_label))
    except BondcatError as exc:
        return trial, False, None, f"{type(exc).__name__}: {exc}"
    return trial, passed, note, None if passed else "check failed"


def run_battery(
    battery: str,
    seed: int,
    trials: int,
    field: Field,
    workers: int = 1,
) -> BatterySummary:
    summary = BatterySummary(name=battery, trials=trials)
    args = [(battery, seed, trial, field.label) for trial in range(trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_trial, *zip(*args)))
    else:
        results = [run_trial(*arg) for arg in args]
    for trial, passed, note, error in sorted(results):
        if passed:
            summary.passed += 1
        else:
            summary.failures.append(f"trial {trial}: {error}")
        if note:
            summary.notes[note] = summary.notes.get(note, 0) + 1
    LOGGER.info("%s: %s/%s passed", battery, summary.passed, trials)
    return summary


def verify_axioms(
    seed: int = config.DEFAULT_SEED,
    trials: int = config.DEFAULT_TRIALS,
    field: Field | None = None,
    only: Sequence[str] | None = None,
    workers: int = config.HARNESS_WORKERS,
    counts: Mapping[str, int] | None = None,
) -> HarnessSummary:
    """Run the batteries; ``counts`` overrides ``trials`` for the batteries it names."""
    field = field or Field.parse(config.PROPERTY_FIELD)
    names = list(only) if only else list(BATTERIES)
    unknown = [name for name in names if name not in BATTERIES]
    if unknown:
        raise ValueError(f"unknown batteries {unknown}; choose from {list(BATTERIES)}")
    summary = HarnessSummary(seed=seed, trials=trials, field=field.label)
    for name in names:
        summary.batteries.append(run_battery(name, seed, (counts or {}).get(name, trials), field, workers))
    return summary
