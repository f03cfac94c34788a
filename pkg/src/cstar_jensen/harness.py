"""Scenario files, check campaigns and canonical reports.

A scenario is a JSON document that fixes the algebra, the coefficient, the
three module spaces F, E, G, an optional (phi, psi) pair, labelled mappings
E -> G and a list of identity ids to check. run_suite executes every
selected check for every mapping with per-check sub-seeds derived from the
scenario seed, so reports are a pure function of (scenario bytes, CLI
overrides).

Checks that presuppose odd or even structure are applied to the matching
extracted part of each mapping: additivity runs on the odd part, the
quadratic equation and the balance identities on the centered even part.
The mapping itself is used everywhere else.
"""
from __future__ import annotations

import datetime
import hashlib
import json
import math
import os
from dataclasses import dataclass

from . import algebra as alg
from . import hilbert as hb
from . import identities as idn
from . import mappings as mp
from .algebra import AlgebraShape, Coefficient
from .errors import (
    CstarJensenError,
    IoError,
    ParseError,
    ValidationError,
)
from .hilbert import ModuleSpace, OrthoSampler
from .identities import CHECK_IDS, IdentityResidual
from .jsonutil import canonical_dumps
from .mappings import AdditivePair, Mapping

TOOL_VERSION = "0.1.0"
SEED_ENV_VAR = "CSTAR_JENSEN_SEED"

DEFAULT_SAMPLES = idn.DEFAULT_SAMPLES
DEFAULT_TOL = idn.DEFAULT_TOL


@dataclass(frozen=True)
class Scenario:
    algebra: AlgebraShape
    coefficient: Coefficient
    space_f: ModuleSpace
    space_e: ModuleSpace
    space_g: ModuleSpace
    pair: AdditivePair | None
    sampler: OrthoSampler | None
    mappings: tuple[tuple[str, Mapping], ...]
    checks: tuple[str, ...]
    samples: int
    seed: int
    tol: float
    digest: str


@dataclass(frozen=True)
class CampaignReport:
    scenario_digest: str
    started: str
    finished: str
    results: tuple[tuple[str, IdentityResidual], ...]
    overall_pass: bool
    tool_version: str

    def to_obj(self) -> dict:
        return {
            "scenario_digest": self.scenario_digest,
            "started": self.started,
            "finished": self.finished,
            "results": [
                {"label": label, **entry.to_obj()} for label, entry in self.results
            ],
            "overall_pass": self.overall_pass,
            "tool_version": self.tool_version,
        }


def _utc_now() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat()


# ---------------------------------------------------------------------------
# scenario loading


def load_scenario(
    path, seed: int | None = None, samples: int | None = None, tol: float | None = None
) -> Scenario:
    """Read and validate a scenario file, applying CLI overrides."""
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise IoError(f"cannot read scenario file {path}: {exc}") from None
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}")
    return scenario_from_obj(obj, raw=raw, seed=seed, samples=samples, tol=tol)


def scenario_from_obj(
    obj,
    raw: bytes | None = None,
    seed: int | None = None,
    samples: int | None = None,
    tol: float | None = None,
) -> Scenario:
    if not isinstance(obj, dict):
        raise ValidationError("scenario must be a JSON object")
    for field in ("algebra", "coefficient", "spaces", "mappings", "checks"):
        if field not in obj:
            raise ValidationError(f"scenario is missing the {field!r} field")

    shape = AlgebraShape(tuple(obj["algebra"]))

    coeff_obj = obj["coefficient"]
    if not isinstance(coeff_obj, dict):
        raise ValidationError("coefficient must be an object")
    strict = bool(coeff_obj.get("strict_order", False))
    value = alg.element_from_obj(coeff_obj)
    if value.shape != shape:
        raise ValidationError("coefficient shape does not match the algebra")
    coefficient = alg.validate_coefficient(value, require_strict_order=strict)

    spaces_obj = obj["spaces"]
    try:
        space_f = ModuleSpace(shape, int(spaces_obj["F"]))
        space_e = ModuleSpace(shape, int(spaces_obj["E"]))
        space_g = ModuleSpace(shape, int(spaces_obj["G"]))
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"spaces must give integer ranks F, E, G: {exc}")

    pair = _pair_from_obj(obj.get("pair"), shape, space_f, space_e)

    mappings = []
    seen = set()
    for entry in obj["mappings"]:
        if not isinstance(entry, dict) or "label" not in entry or "map" not in entry:
            raise ValidationError("each mapping needs 'label' and 'map' fields")
        label = str(entry["label"])
        if label in seen:
            raise ValidationError(f"duplicate mapping label {label!r}")
        seen.add(label)
        mappings.append((label, mp.mapping_from_obj(entry["map"], space_e, space_g)))
    if not mappings:
        raise ValidationError("a campaign needs at least one mapping")

    checks = []
    for check_id in obj["checks"]:
        if check_id not in CHECK_IDS:
            raise ValidationError(f"unknown identity id {check_id!r}")
        if check_id not in checks:
            checks.append(check_id)
    if not checks:
        raise ValidationError("a campaign needs at least one check")

    sampler = _sampler_from_obj(obj.get("sampler"), space_e, pair)

    n_samples = samples if samples is not None else int(obj.get("samples", DEFAULT_SAMPLES))
    if n_samples < 1:
        raise ValidationError("samples must be at least 1")
    tolerance = tol if tol is not None else float(obj.get("tol", DEFAULT_TOL))
    if not tolerance > 0.0:
        raise ValidationError("tol must be positive")
    if seed is not None:
        seed_val = seed
    elif "seed" in obj:
        seed_val = int(obj["seed"])
    else:
        seed_val = int(os.environ.get(SEED_ENV_VAR, "0"))
    if seed_val < 0:
        raise ValidationError("seed must be non-negative")

    overrides = {}
    if seed is not None:
        overrides["seed"] = seed
    if samples is not None:
        overrides["samples"] = samples
    if tol is not None:
        overrides["tol"] = tol
    if raw is None:
        raw = canonical_dumps(obj).encode()
    digest = hashlib.sha256(raw + b"\n" + canonical_dumps(overrides).encode()).hexdigest()

    return Scenario(
        algebra=shape,
        coefficient=coefficient,
        space_f=space_f,
        space_e=space_e,
        space_g=space_g,
        pair=pair,
        sampler=sampler,
        mappings=tuple(mappings),
        checks=tuple(checks),
        samples=n_samples,
        seed=seed_val,
        tol=tolerance,
        digest=digest,
    )


def _pair_from_obj(obj, shape, space_f, space_e) -> AdditivePair | None:
    if obj is None:
        return None
    if not isinstance(obj, dict):
        raise ValidationError("pair must be an object")
    builder = obj.get("builder")
    if builder == "interleave":
        if shape.block_dims != (1,):
            raise ValidationError("the interleave builder needs the scalar algebra [1]")
        if space_e.rank != 2 * space_f.rank:
            raise ValidationError("the interleave builder needs E rank = 2 * F rank")
        return mp.interleave_pair(float(obj["p"]), space_e.rank)
    if builder == "morphism_shift":
        if space_e.rank != 2 * space_f.rank:
            raise ValidationError("the morphism_shift builder needs E rank = 2 * F rank")
        return mp.morphism_shift_pair(shape, space_f.rank)
    if builder not in (None, "explicit"):
        raise ValidationError(f"unknown pair builder {builder!r}")
    for field in ("phi", "psi", "a"):
        if field not in obj:
            raise ValidationError(f"explicit pair is missing the {field!r} field")
    phi = mp.mapping_from_obj(obj["phi"], space_f, space_e)
    psi = mp.mapping_from_obj(obj["psi"], space_f, space_e)
    a_elem = alg.element_from_obj(obj["a"])
    if a_elem.shape != shape:
        raise ValidationError("pair coefficient shape does not match the algebra")
    a = alg.validate_coefficient(a_elem)
    return mp.validate_pair(phi, psi, a)


def _sampler_from_obj(obj, space_e, pair) -> OrthoSampler | None:
    if obj is None:
        # default: split the coordinates in half, else fall back to the pair
        if space_e.rank >= 2:
            half = space_e.rank // 2
            return hb.disjoint_support_sampler(
                space_e, range(half), range(half, space_e.rank)
            )
        if pair is not None:
            return hb.pair_image_sampler(pair)
        return None
    if not isinstance(obj, dict) or "mode" not in obj:
        raise ValidationError("sampler must be an object with a 'mode' tag")
    mode = obj["mode"]
    if mode == "disjoint_support":
        return hb.disjoint_support_sampler(
            space_e, obj["left_coords"], obj["right_coords"]
        )
    if mode == "pair_image":
        if pair is None:
            raise ValidationError("pair_image sampler needs a scenario pair")
        return hb.pair_image_sampler(pair)
    if mode == "explicit":
        pairs = [
            (
                hb.vector_from_obj(x, space_e),
                hb.vector_from_obj(y, space_e),
            )
            for x, y in obj["pairs"]
        ]
        return hb.explicit_sampler(space_e, pairs)
    raise ValidationError(f"unknown sampler mode {mode!r}")


# ---------------------------------------------------------------------------
# campaign execution

_FAMILIES = (
    "jensen",
    "scaling",
    "expansion",
    "orth-display",
    "additive",
    "quadratic",
    "balance",
    "decompose",
    "unique",
    "scalar",
)

_FAMILY_OF = {
    "eq-1.1": "jensen",
    "lemma2.1-i": "scaling",
    "lemma2.1-ii": "scaling",
    "lemma2.1-iii": "scaling",
    "lemma2.1-iv": "scaling",
    "lemma2.1-v": "scaling",
    "lemma2.1-vi": "scaling",
    "lemma2.2": "expansion",
    "lemma2.2-orth": "orth-display",
    "prop2.3-additive": "additive",
    "prop2.5-quadratic": "quadratic",
    "prop2.5-id211": "balance",
    "prop2.5-id212": "balance",
    "thm2.7-reconstruct": "decompose",
    "thm2.7-A-a-additive": "decompose",
    "thm2.7-B-symmetric": "decompose",
    "thm2.7-B-biadditive": "decompose",
    "thm2.7-B-a-biadditive": "decompose",
    "thm2.7-B-orth-preserving": "decompose",
    "thm2.7-unique": "unique",
    "cor2.9-B-vanishes": "scalar",
}


def _require_pair(scenario: Scenario) -> AdditivePair:
    if scenario.pair is None:
        raise ValidationError("this check needs a scenario pair")
    return scenario.pair


def _scalar_of(coefficient: Coefficient) -> float:
    """The real scalar p with coefficient = p * 1, or DomainError."""
    value = coefficient.value
    p = float(value.blocks[0][0, 0].real)
    probe = alg.scale(alg.unit(value.shape), p)
    if alg.residual(value, probe) > 1e-12:
        raise ValidationError("coefficient is not a real scalar multiple of the unit")
    return p


def _f_samples(scenario: Scenario, seed_base: list, n: int):
    space_f = _require_pair(scenario).phi.domain
    return [
        (
            hb.sample_vector(space_f, seed_base + [i, 0]),
            hb.sample_vector(space_f, seed_base + [i, 1]),
        )
        for i in range(n)
    ]


def _run_family(scenario: Scenario, f: Mapping, family: str, seed_base: list):
    n, tol = scenario.samples, scenario.tol
    if family == "jensen":
        if scenario.sampler is None:
            raise ValidationError("eq-1.1 needs an orthogonal-pair sampler")
        entry = idn.check_orthogonal_jensen(
            f, scenario.coefficient, scenario.sampler, n, tol, seed_base
        )
        return {entry.identity_id: entry}
    if family == "scaling":
        xs = []
        if scenario.sampler is not None and scenario.sampler.mode == "explicit":
            for x, y in scenario.sampler.pairs:
                xs.extend([x, y])
        while len(xs) < n:
            xs.append(hb.sample_vector(scenario.space_e, seed_base + [len(xs)]))
        entries = idn.scaling_identity_suite(f, scenario.coefficient, xs, tol)
        return {entry.identity_id: entry for entry in entries}
    if family == "expansion":
        pair = _require_pair(scenario)
        entry = idn.pair_expansion_check(
            f, pair, _f_samples(scenario, seed_base, n), tol
        )
        return {entry.identity_id: entry}
    if family == "orth-display":
        pair = _require_pair(scenario)
        entry = idn.orthogonality_identity_check(
            pair, _f_samples(scenario, seed_base, n), tol
        )
        return {entry.identity_id: entry}
    if family == "additive":
        pair = _require_pair(scenario)
        entry = idn.check_additivity_on_pair_range(
            idn.extract_additive_part(f), pair, n, tol, seed_base
        )
        return {entry.identity_id: entry}
    if family == "quadratic":
        pair = _require_pair(scenario)
        entry = idn.check_quadratic_on_pair_range(
            idn.CenteredEvenPart(f), pair, n, tol, seed_base
        )
        return {entry.identity_id: entry}
    if family == "balance":
        pair = _require_pair(scenario)
        first, second = idn.check_pair_balance_identities(
            idn.CenteredEvenPart(f), pair, n, tol, seed_base
        )
        return {first.identity_id: first, second.identity_id: second}
    if family == "decompose":
        pair = _require_pair(scenario)
        dec = idn.decompose(f, scenario.coefficient, pair, n, tol, seed_base)
        return {
            entry.identity_id: entry
            for entry in dec.property_report
            if entry.identity_id.startswith("thm2.7-")
        }
    if family == "unique":
        pair = _require_pair(scenario)
        first = idn.decompose(
            f, scenario.coefficient, pair, n, tol, seed_base + [0]
        )
        second = idn.decompose(
            f, scenario.coefficient, pair, n, tol, seed_base + [1]
        )
        entry = idn.uniqueness_check(f, first, second, n, tol, seed_base + [2])
        return {entry.identity_id: entry}
    if family == "scalar":
        pair = _require_pair(scenario)
        p = _scalar_of(scenario.coefficient)
        entry = idn.check_scalar_affine_reduction(f, p, pair, n, tol, seed_base)
        return {entry.identity_id: entry}
    raise ValidationError(f"unknown check family {family!r}")  # pragma: no cover


def run_suite(scenario: Scenario) -> CampaignReport:
    """Execute every selected check for every mapping.

    Checker errors become failure entries with the message in worst_input;
    the campaign itself never aborts.
    """
    started = _utc_now()
    results: list[tuple[str, IdentityResidual]] = []
    for mi, (label, f) in enumerate(scenario.mappings):
        cache: dict[str, object] = {}
        for check_id in scenario.checks:
            family = _FAMILY_OF[check_id]
            if family not in cache:
                seed_base = [scenario.seed, mi, _FAMILIES.index(family)]
                try:
                    cache[family] = _run_family(scenario, f, family, seed_base)
                except Exception as exc:
                    cache[family] = exc
            outcome = cache[family]
            if isinstance(outcome, Exception):
                results.append(
                    (
                        label,
                        IdentityResidual(
                            check_id, 0, math.inf, {"error": str(outcome)}, False
                        ),
                    )
                )
            else:
                results.append((label, outcome[check_id]))
    results.sort(key=lambda item: (item[0], item[1].identity_id))
    overall = all(entry.passed for _, entry in results)
    return CampaignReport(
        scenario_digest=scenario.digest,
        started=started,
        finished=_utc_now(),
        results=tuple(results),
        overall_pass=overall,
        tool_version=TOOL_VERSION,
    )


def emit_report(report: CampaignReport, path) -> None:
    """Write the report as canonical JSON."""
    text = canonical_dumps(report.to_obj())
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
            fh.write("\n")
    except OSError as exc:
        raise IoError(f"cannot write report to {path}: {exc}") from None


def run_decompose(
    scenario: Scenario, label: str
) -> tuple[idn.Decomposition, CampaignReport]:
    """Decompose one labelled mapping and wrap the outcome as a report."""
    for name, f in scenario.mappings:
        if name == label:
            break
    else:
        raise ValidationError(f"no mapping labelled {label!r} in the scenario")
    pair = _require_pair(scenario)
    started = _utc_now()
    dec = idn.decompose(
        f, scenario.coefficient, pair, scenario.samples, scenario.tol, [scenario.seed]
    )
    results = tuple(
        (label, entry)
        for entry in sorted(dec.property_report, key=lambda e: e.identity_id)
    )
    report = CampaignReport(
        scenario_digest=scenario.digest,
        started=started,
        finished=_utc_now(),
        results=results,
        overall_pass=dec.passed,
        tool_version=TOOL_VERSION,
    )
    return dec, report
