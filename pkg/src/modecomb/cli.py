"""Scenario-driven command line interface.

Subcommands:

* ``simulate <config.json>`` — build the comb and/or wire described by a
  scenario file, evaluate entanglement witnesses (optionally over a
  parameter sweep), and write ``<name>_witness.csv`` (or ``.json``) plus
  ``<name>_graph.json`` into the output directory.
* ``decompose <network.json>`` — compose a network of elementary Gaussian
  elements and write its passive-squeeze-passive factorization as JSON.
* ``noise-table --gains .. --etas .. --misalignments ..`` — tabulate the
  closed-form detection noise over a parameter grid next to the simulated
  value where defined.

Exit codes: 0 success, 2 parse failure (malformed JSON or argument lists),
3 validation failure (well-formed input with invalid content), 4 internal
contract violation.

Everything here is deterministic; the scenario ``seed`` is only echoed into
reports so that downstream tooling can record provenance.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .blochmessiah import decompose as bloch_messiah_decompose
from .blochmessiah import recompose
from .cluster import (
    DualRailSpec,
    bipartite_graph,
    build_dual_rail,
    extract_graph,
    nullifier_residual,
    wire_witnesses,
)
from .comb import (
    OverlapSpec,
    amplify_comb,
    build_comb,
    pair_witnesses,
)
from .detection import ideal_epr_noise, measure_witness, misaligned_noise
from .elements import (
    AmplifierSpec,
    beamsplitter,
    phase_shift,
    two_mode_squeezer,
)
from .gaussian import SymplecticTransform, apply_symplectic, vacuum_state

CONFIG_VERSION = "v1"

#: Float formatting used in all tabular output; fixed for byte-stable files.
FLOAT_FORMAT = ".12g"


class ScenarioError(ValueError):
    """A structurally valid config with invalid content.

    Attributes:
        field: dotted path of the offending field, e.g. ``"comb.M"``.
    """

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class CombConfig:
    m: int
    cells: int
    gain: float
    r: float


@dataclass(frozen=True)
class DetectionConfig:
    eta_d: float = 1.0
    misalignment: float = 0.0
    stray_etas: tuple = ()


@dataclass(frozen=True)
class SweepConfig:
    parameter: str
    values: tuple


@dataclass(frozen=True)
class Scenario:
    name: str
    comb: CombConfig | None
    wire: DualRailSpec | None
    detection: DetectionConfig
    sweep: SweepConfig | None
    seed: int | None


def _require(mapping, field, kind, path):
    value = mapping.get(field)
    if not isinstance(value, kind) or isinstance(value, bool):
        kinds = kind if isinstance(kind, tuple) else (kind,)
        names = "/".join(k.__name__ for k in kinds)
        raise ScenarioError(f"{path}.{field}", f"must be a {names}")
    return value


def _parse_comb(raw):
    m = _require(raw, "M", int, "comb")
    cells = raw.get("cells", 1)
    if not isinstance(cells, int) or isinstance(cells, bool):
        raise ScenarioError("comb.cells", "must be an integer")
    has_gain = "gain" in raw
    has_r = "r" in raw
    if has_gain == has_r:
        raise ScenarioError("comb", "exactly one of 'gain' or 'r' is required")
    try:
        if has_gain:
            amp = AmplifierSpec.from_gain(float(raw["gain"]))
        else:
            amp = AmplifierSpec.from_squeezing(float(raw["r"]))
        build_comb(m, amp, cells)
    except (TypeError, ValueError) as exc:
        field = "comb.gain" if has_gain else "comb.r"
        if isinstance(exc, ValueError) and ("mode count" in str(exc) or "cell" in str(exc)):
            field = "comb.M" if "mode count" in str(exc) else "comb.cells"
        raise ScenarioError(field, str(exc)) from exc
    return CombConfig(m=m, cells=cells, gain=amp.gain, r=amp.r)


def _parse_wire(raw):
    n_pairs = _require(raw, "n_pairs", int, "wire")
    r = _require(raw, "r", (int, float), "wire")
    convention = raw.get("phase_convention", "odd_mode_minus_half_pi")
    try:
        return DualRailSpec(
            n_pairs=n_pairs, r=float(r), phase_convention=convention
        )
    except ValueError as exc:
        message = str(exc)
        if "sources" in message:
            field = "wire.n_pairs"
        elif "squeezing" in message:
            field = "wire.r"
        else:
            field = "wire.phase_convention"
        raise ScenarioError(field, message) from exc


def _parse_detection(raw):
    eta_d = raw.get("eta_d", 1.0)
    misalignment = raw.get("misalignment", 0.0)
    stray_etas = raw.get("stray_etas", [])
    if not isinstance(eta_d, (int, float)) or not 0.0 < float(eta_d) <= 1.0:
        raise ScenarioError("detection.eta_d", "must be a number in (0, 1]")
    if (
        not isinstance(misalignment, (int, float))
        or not 0.0 <= float(misalignment) <= 1.0
    ):
        raise ScenarioError(
            "detection.misalignment", "must be a number in [0, 1]"
        )
    if not isinstance(stray_etas, list):
        raise ScenarioError("detection.stray_etas", "must be a list of numbers")
    etas = []
    for e in stray_etas:
        if not isinstance(e, (int, float)) or not 0.0 <= float(e) < float(eta_d):
            raise ScenarioError(
                "detection.stray_etas",
                f"each entry must lie in [0, eta_d = {eta_d})",
            )
        etas.append(float(e))
    if float(misalignment) > 0.0 and not etas:
        raise ScenarioError(
            "detection.stray_etas",
            "at least one stray mode is required when misalignment > 0",
        )
    return DetectionConfig(
        eta_d=float(eta_d),
        misalignment=float(misalignment),
        stray_etas=tuple(etas),
    )


#: Sweepable dotted field paths mapped to scenario updaters.
_SWEEP_FIELDS = {
    "comb.gain": lambda sc, v: replace(
        sc, comb=_comb_with_gain(sc.comb, gain=v)
    ),
    "comb.r": lambda sc, v: replace(sc, comb=_comb_with_gain(sc.comb, r=v)),
    "wire.r": lambda sc, v: replace(sc, wire=replace(sc.wire, r=v)),
    "detection.eta_d": lambda sc, v: replace(
        sc, detection=replace(sc.detection, eta_d=v)
    ),
    "detection.misalignment": lambda sc, v: replace(
        sc, detection=replace(sc.detection, misalignment=v)
    ),
}


def _comb_with_gain(comb_config, gain=None, r=None):
    amp = (
        AmplifierSpec.from_gain(gain)
        if gain is not None
        else AmplifierSpec.from_squeezing(r)
    )
    return CombConfig(
        m=comb_config.m, cells=comb_config.cells, gain=amp.gain, r=amp.r
    )


def _parse_sweep(raw, scenario):
    parameter = _require(raw, "parameter", str, "sweep")
    values = raw.get("values")
    if (
        not isinstance(values, list)
        or not values
        or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool)
            for v in values
        )
    ):
        raise ScenarioError("sweep.values", "must be a nonempty number list")
    if parameter not in _SWEEP_FIELDS:
        raise ScenarioError(
            "sweep.parameter",
            f"unknown field {parameter!r}; expected one of "
            f"{sorted(_SWEEP_FIELDS)}",
        )
    section = parameter.split(".", 1)[0]
    if getattr(scenario, section, None) is None:
        raise ScenarioError(
            "sweep.parameter", f"scenario has no {section!r} section to sweep"
        )
    return SweepConfig(parameter=parameter, values=tuple(float(v) for v in values))


def parse_scenario(raw):
    """Validate a decoded config dict into a :class:`Scenario`.

    Raises:
        ScenarioError: naming the offending field.
    """
    if not isinstance(raw, dict):
        raise ScenarioError("config", "top level must be an object")
    version = raw.get("version", CONFIG_VERSION)
    if version != CONFIG_VERSION:
        raise ScenarioError(
            "version", f"unsupported config version {version!r}"
        )
    name = _require(raw, "name", str, "config")
    if not name or any(c in name for c in "/\\"):
        raise ScenarioError("config.name", "must be a nonempty path-safe string")
    seed = raw.get("seed")
    if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool)):
        raise ScenarioError("config.seed", "must be an integer")
    comb = _parse_comb(raw["comb"]) if "comb" in raw else None
    wire = _parse_wire(raw["wire"]) if "wire" in raw else None
    if comb is None and wire is None:
        raise ScenarioError(
            "config", "at least one of 'comb' or 'wire' is required"
        )
    detection = _parse_detection(raw.get("detection", {}))
    scenario = Scenario(
        name=name,
        comb=comb,
        wire=wire,
        detection=detection,
        sweep=None,
        seed=seed,
    )
    if "sweep" in raw:
        sweep_raw = raw["sweep"]
        if not isinstance(sweep_raw, dict):
            raise ScenarioError("sweep", "must be an object")
        scenario = replace(scenario, sweep=_parse_sweep(sweep_raw, scenario))
    return scenario


def _sweep_points(scenario):
    """Yield (value-or-None, concrete scenario) pairs, sorted by value."""
    if scenario.sweep is None:
        yield None, scenario
        return
    update = _SWEEP_FIELDS[scenario.sweep.parameter]
    for value in sorted(scenario.sweep.values):
        try:
            yield value, update(scenario, value)
        except ValueError as exc:
            raise ScenarioError(
                "sweep.values", f"value {value}: {exc}"
            ) from exc


def _witness_rows(scenario):
    """Evaluate all witnesses of one concrete (non-sweep) scenario."""
    det = scenario.detection
    rows = []
    if scenario.comb is not None:
        cfg = scenario.comb
        comb = build_comb(
            cfg.m, AmplifierSpec.from_squeezing(cfg.r), cfg.cells
        )
        if det.misalignment > 0.0:
            # Closed-form misaligned detection; identical for every pair.
            spec = OverlapSpec(
                total_power=1.0,
                aligned_power=1.0 - det.misalignment,
                stray_powers=tuple(
                    [det.misalignment / len(det.stray_etas)]
                    * len(det.stray_etas)
                ),
                detector_eta=det.eta_d,
                stray_etas=det.stray_etas,
            )
            report = misaligned_noise(spec, cfg.gain)
            for i in range(comb.n_pairs):
                rows.append((f"pair{i}_xdiff", report))
        else:
            state = amplify_comb(vacuum_state(comb.n_modes), comb)
            for i, (wx, _) in enumerate(pair_witnesses(comb)):
                rows.append(
                    (f"pair{i}_xdiff", measure_witness(state, wx, det.eta_d))
                )
    if scenario.wire is not None:
        state, _ = build_dual_rail(scenario.wire)
        for label, witness in wire_witnesses(scenario.wire):
            rows.append((label, measure_witness(state, witness, det.eta_d)))
    return rows


def _graph_report(scenario):
    """Graph description of the base (unswept) scenario."""
    if scenario.wire is not None:
        state, _ = build_dual_rail(scenario.wire)
        graph = extract_graph(state)
        residual = nullifier_residual(state, graph)
        source = "wire"
    else:
        cfg = scenario.comb
        comb = build_comb(
            cfg.m, AmplifierSpec.from_squeezing(cfg.r), cfg.cells
        )
        graph = bipartite_graph(comb)
        residual = None
        source = "comb"
    return {
        "name": scenario.name,
        "seed": scenario.seed,
        "source": source,
        "n_nodes": graph.n_nodes,
        "edges": [[i, j, w] for i, j, w in graph.edges],
        "nullifier_residual": residual,
    }


def _format_value(value):
    return "" if value is None else format(value, FLOAT_FORMAT)


def run_scenario(config_path, out_dir=".", fmt="csv"):
    """Run a scenario file and write its witness table and graph report.

    Args:
        config_path: path of the JSON scenario
        out_dir: directory receiving the report files
        fmt: "csv" or "json" for the witness table

    Returns:
        list[Path]: the written file paths
    """
    text = Path(config_path).read_text(encoding="utf-8")
    scenario = parse_scenario(json.loads(text))

    rows = []
    for value, point in _sweep_points(scenario):
        parameter = scenario.sweep.parameter if scenario.sweep else None
        for witness_id, report in _witness_rows(point):
            rows.append(
                {
                    "scenario": scenario.name,
                    "parameter": parameter or "",
                    "value": _format_value(value),
                    "witness_id": witness_id,
                    "variance": format(report.variance, FLOAT_FORMAT),
                    "dB": format(report.db, FLOAT_FORMAT),
                }
            )

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    header = ["scenario", "parameter", "value", "witness_id", "variance", "dB"]
    if fmt == "csv":
        witness_path = out / f"{scenario.name}_witness.csv"
        with witness_path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=header)
            writer.writeheader()
            writer.writerows(rows)
    else:
        witness_path = out / f"{scenario.name}_witness.json"
        witness_path.write_text(
            json.dumps(rows, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    written.append(witness_path)

    graph_path = out / f"{scenario.name}_graph.json"
    graph_path.write_text(
        json.dumps(_graph_report(scenario), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    written.append(graph_path)
    return written


_ELEMENT_BUILDERS = {
    "two_mode_squeezer": (
        2,
        lambda spec: two_mode_squeezer(
            float(spec.get("r", 0.0)), float(spec.get("phase", 0.0))
        ),
    ),
    "beamsplitter": (
        2,
        lambda spec: beamsplitter(
            float(spec.get("theta", math.pi / 4)), float(spec.get("phi", 0.0))
        ),
    ),
    "phase_shift": (1, lambda spec: phase_shift(float(spec.get("phi", 0.0)))),
}


def _parse_network(raw):
    """Compose a network file into one SymplecticTransform."""
    if not isinstance(raw, dict):
        raise ScenarioError("network", "top level must be an object")
    n_modes = _require(raw, "n_modes", int, "network")
    if n_modes < 1:
        raise ScenarioError("network.n_modes", "must be >= 1")
    elements = raw.get("elements", [])
    if not isinstance(elements, list):
        raise ScenarioError("network.elements", "must be a list")
    total = SymplecticTransform.identity(n_modes)
    for i, spec in enumerate(elements):
        path = f"network.elements[{i}]"
        if not isinstance(spec, dict) or "type" not in spec:
            raise ScenarioError(path, "must be an object with a 'type'")
        kind = spec["type"]
        if kind not in _ELEMENT_BUILDERS:
            raise ScenarioError(
                f"{path}.type",
                f"unknown element {kind!r}; expected one of "
                f"{sorted(_ELEMENT_BUILDERS)}",
            )
        arity, builder = _ELEMENT_BUILDERS[kind]
        modes = spec.get("modes")
        if (
            not isinstance(modes, list)
            or len(modes) != arity
            or not all(isinstance(m, int) and 0 <= m < n_modes for m in modes)
            or len(set(modes)) != len(modes)
        ):
            raise ScenarioError(
                f"{path}.modes",
                f"must list {arity} distinct mode indices below {n_modes}",
            )
        try:
            element = builder(spec)
        except (TypeError, ValueError) as exc:
            raise ScenarioError(path, str(exc)) from exc
        # Embed the element and left-multiply onto the running product.
        embedded = apply_symplectic_matrix(total.n_modes, element, modes)
        total = SymplecticTransform(embedded @ total.matrix, n_modes)
    return total


def apply_symplectic_matrix(n_modes, transform, modes):
    """Embed a small transform as a full 2N x 2N matrix."""
    full = np.eye(2 * n_modes)
    idx = np.array([*modes, *(n_modes + m for m in modes)])
    full[np.ix_(idx, idx)] = transform.matrix
    return full


def cmd_decompose(network_path, out_dir="."):
    """Decompose a network file; write and return the JSON report path."""
    text = Path(network_path).read_text(encoding="utf-8")
    total = _parse_network(json.loads(text))
    try:
        result = bloch_messiah_decompose(total)
        error = float(np.linalg.norm(recompose(result).matrix - total.matrix))
    except ValueError as exc:
        raise InternalContractError(str(exc)) from exc
    report = {
        "n_modes": total.n_modes,
        "squeeze": [float(r) for r in result.squeeze],
        "recomposition_error": error,
        "passive_out": result.passive_out.matrix.tolist(),
        "passive_in": result.passive_in.matrix.tolist(),
    }
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{Path(network_path).stem}_decomposition.json"
    path.write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return path


class InternalContractError(RuntimeError):
    """A violated internal invariant (exit code 4)."""


#: Reduced efficiency assumed for the single stray mode of noise-table rows.
STRAY_ETA_FRACTION = 0.5


def cmd_noise_table(gains, etas, misalignments, out_dir=".", fmt="csv"):
    """Tabulate closed-form and simulated detection noise over a grid.

    One row per (gain, eta, misalignment) triple, sorted ascending. The
    simulated column drives an explicit amplified pair through loss channels
    and is only defined at zero misalignment; misaligned rows use the
    closed form with one stray mode at ``eta_i = eta / 2``.

    Returns:
        Path: the written table path
    """
    for name, values in (("gains", gains), ("etas", etas),
                         ("misalignments", misalignments)):
        if not values:
            raise ScenarioError(name, "needs at least one value")
    rows = []
    for gain in sorted(gains):
        for eta in sorted(etas):
            for misalignment in sorted(misalignments):
                if misalignment == 0.0:
                    closed = ideal_epr_noise(gain, eta)
                    simulated = _simulated_pair_noise(gain, eta)
                    difference = abs(closed.variance - simulated)
                    sim_text = format(simulated, FLOAT_FORMAT)
                    diff_text = format(difference, FLOAT_FORMAT)
                else:
                    spec = OverlapSpec(
                        total_power=1.0,
                        aligned_power=1.0 - misalignment,
                        stray_powers=(misalignment,),
                        detector_eta=eta,
                        stray_etas=(eta * STRAY_ETA_FRACTION,),
                    )
                    closed = misaligned_noise(spec, gain)
                    sim_text = ""
                    diff_text = ""
                rows.append(
                    {
                        "gain": format(gain, FLOAT_FORMAT),
                        "eta": format(eta, FLOAT_FORMAT),
                        "misalignment": format(misalignment, FLOAT_FORMAT),
                        "closed_form": format(closed.variance, FLOAT_FORMAT),
                        "simulated": sim_text,
                        "abs_difference": diff_text,
                    }
                )

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    header = [
        "gain", "eta", "misalignment", "closed_form", "simulated",
        "abs_difference",
    ]
    if fmt == "csv":
        path = out / "noise_table.csv"
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=header)
            writer.writeheader()
            writer.writerows(rows)
    else:
        path = out / "noise_table.json"
        path.write_text(
            json.dumps(rows, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
    return path


def _simulated_pair_noise(gain, eta):
    """Drive one amplified pair through loss and measure the x-difference."""
    comb = build_comb(2, AmplifierSpec.from_gain(gain))
    state = amplify_comb(vacuum_state(2), comb)
    (wx, _), = pair_witnesses(comb)
    return measure_witness(state, wx, eta).variance


def _float_list(text):
    try:
        return [float(part) for part in text.split(",") if part != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"expected a comma-separated number list, got {text!r}"
        ) from exc


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="modecomb",
        description="Gaussian simulator for mode-comb cluster states",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    simulate = sub.add_parser(
        "simulate", help="run a scenario config and write reports"
    )
    simulate.add_argument("config", help="scenario JSON file")

    decompose_cmd = sub.add_parser(
        "decompose", help="factor a network file into passive-squeeze-passive"
    )
    decompose_cmd.add_argument("network", help="network JSON file")

    noise = sub.add_parser(
        "noise-table", help="tabulate detection noise over a parameter grid"
    )
    noise.add_argument("--gains", type=_float_list, required=True)
    noise.add_argument("--etas", type=_float_list, required=True)
    noise.add_argument("--misalignments", type=_float_list, default=[0.0])

    for cmd in (simulate, decompose_cmd, noise):
        cmd.add_argument("--out-dir", default=".", help="output directory")
        cmd.add_argument(
            "--format", choices=("csv", "json"), default="csv",
            help="tabular output format",
        )
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            written = run_scenario(args.config, args.out_dir, args.format)
        elif args.command == "decompose":
            written = [cmd_decompose(args.network, args.out_dir)]
        else:
            written = [
                cmd_noise_table(
                    args.gains, args.etas, args.misalignments,
                    args.out_dir, args.format,
                )
            ]
    except json.JSONDecodeError as exc:
        print(
            f"parse error: line {exc.lineno} column {exc.colno}: {exc.msg}",
            file=sys.stderr,
        )
        return 2
    except FileNotFoundError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except ScenarioError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 3
    except InternalContractError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 4
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
