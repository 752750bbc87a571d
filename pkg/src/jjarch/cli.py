"""Command-line entry point: ``jjarch <command> [--key value ...]``.

Commands: ``qubit-spectrum``, ``couple``, ``evolve`` and ``memory``. Every
flag may also be given in a ``key=value`` file passed with ``--config``;
flags on the command line win. Results are written as CSV (default) or JSON
with 12 significant digits, to ``--output``, to ``$JJARCH_OUTPUT_DIR`` when
set, or to stdout.
"""

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from .coupling import (
    CapacitiveNetwork,
    ChargeSpin,
    TransformerCircuit,
    TunableJosephson,
    b_zero_crossings,
    couple_charge_qubits,
    couple_phase_qubits,
    makhlin_register,
    transformer_couplings,
    transformer_effective,
)
from .errors import JJArchError
from .memory import EQUATOR, ONE, ZERO, format_number, sweep_fidelity, write_golden
from .qubits import (
    JunctionParams,
    build_flux_qubit,
    build_phase_qubit,
    charge_basis_hamiltonian,
    width_harmonic,
)
from .resonator import ResonatorSystem, amplitudes

OUTPUT_DIR_ENV = "JJARCH_OUTPUT_DIR"
PICO = 1e-12


class UsageError(Exception):
    """Invalid flag value; the message names the offending key."""


@dataclass
class Table:
    columns: list
    rows: list
    meta: dict = field(default_factory=dict)


# --- parsing helpers -------------------------------------------------------


def parse_range(text, key="range"):
    """'lo:hi:n' -> ascending grid of n points."""
    parts = str(text).split(":")
    if len(parts) != 3:
        raise UsageError(f"{key}: expected lo:hi:n, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"{key}: expected lo:hi:n, got {text!r}") from None
    if n < 1 or (n > 1 and not hi > lo):
        raise UsageError(f"{key}: need n >= 1 and hi > lo, got {text!r}")
    return np.linspace(lo, hi, n)


def _bool(text):
    if isinstance(text, bool):
        return text
    value = str(text).strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


def read_config(path):
    """Parse ``key=value`` lines; '#' starts a comment."""
    entries = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            entries[key.replace("-", "_")] = value
    return entries


def _require(cond, key, message):
    if not cond:
        raise UsageError(f"{key}: {message}")


# --- qubit-spectrum --------------------------------------------------------


def _junction_from_args(args):
    if args.i0_uA is not None or args.c_pF is not None:
        _require(args.i0_uA is not None and args.i0_uA > 0, "i0-uA", "must be given and positive")
        _require(args.c_pF is not None and args.c_pF > 0, "c-pF", "must be given and positive")
        return JunctionParams.from_circuit(args.i0_uA * 1e-6, args.c_pF * PICO, args.bias)
    _require(args.ec > 0, "ec", "must be positive")
    _require(args.ej >= 0, "ej", "must be non-negative")
    return JunctionParams(args.ej, args.ec, args.bias)


def cmd_qubit_spectrum(args):
    _require(args.levels >= 2, "levels", "must be at least 2")
    params = _junction_from_args(args)
    meta = {"type": args.type, "E_J": params.ej, "E_c": params.ec}
    if args.type == "phase":
        _require(0 <= args.bias < 1, "bias", "must lie in [0, 1)")
        _require(params.ej > 0, "ej", "must be positive for a phase qubit")
        model = build_phase_qubit(params, n_levels=args.levels)
        meta.update(
            bias=params.bias,
            hbar_omega_p=model.plasma,
            width=model.width,
            width_harmonic=width_harmonic(params),
            gap=model.gap,
        )
        e = model.levels.energies
        rows = [[k, e[k], e[k] - e[0], model.dipoles[0, k]] for k in range(len(e))]
        return Table(["level", "energy", "excitation", "x0m"], rows, meta)
    if args.type == "charge":
        _require(args.n_cutoff >= 2, "n-cutoff", "must be at least 2")
        ngs = parse_range(args.ng_scan, "ng-scan") if args.ng_scan else np.array([args.ng])
        rows = []
        for ng in ngs:
            e = np.linalg.eigvalsh(charge_basis_hamiltonian(params.ec, params.ej, ng, args.n_cutoff))[: args.levels]
            rows.append([ng, *e, e[1] - e[0]])
        cols = ["ng"] + [f"E{k}" for k in range(args.levels)] + ["gap"]
        return Table(cols, rows, meta)
    # flux
    _require(args.hbar_omega_lc > 0, "hbar-omega-lc", "must be positive")
    fluxes = parse_range(args.flux_scan, "flux-scan") if args.flux_scan else np.array([args.flux])
    rows = []
    for f in fluxes:
        model = build_flux_qubit(params, args.hbar_omega_lc, f, n_levels=args.levels)
        e = model.levels.energies
        rows.append([f, model.bz, model.bx, *e[: args.levels]])
    meta.update(hbar_omega_lc=args.hbar_omega_lc, inductive_energy=model.inductive_energy)
    return Table(["flux", "bz", "bx"] + [f"E{k}" for k in range(args.levels)], rows, meta)


# --- couple ----------------------------------------------------------------


def _matrix_rows(m):
    return [[i, j, m[i, j].real, m[i, j].imag] for i in range(m.shape[0]) for j in range(m.shape[1])]


def _scalar_couplings(couplings):
    return {k: v for k, v in couplings.items() if np.isscalar(v)}


def cmd_couple(args):
    arch = args.arch
    cols = ["i", "j", "re", "im"]
    if arch == "tunable-ej":
        ej = TunableJosephson(args.ej0, args.flux_ratio).ej
        return Table(["flux_ratio", "ej"], [[args.flux_ratio, ej]], {"arch": arch, "ej0": args.ej0})
    if arch in ("phase-cap", "charge-cap"):
        for key in ("c1", "c2"):
            _require(getattr(args, key) > 0, key, "must be positive (pF)")
        _require(args.cint >= 0, "cint", "must be non-negative (pF)")
        net = CapacitiveNetwork(
            args.c1 * PICO, args.c2 * PICO, args.cint * PICO, args.cg1 * PICO, args.cg2 * PICO
        )
        if arch == "phase-cap":
            _require(0 <= args.bias < 1, "bias", "must lie in [0, 1)")
            _require(args.i0_uA > 0, "i0-uA", "must be positive")
            q1 = JunctionParams.from_circuit(args.i0_uA * 1e-6, args.c1 * PICO, args.bias)
            q2 = JunctionParams.from_circuit(args.i0_uA * 1e-6, args.c2 * PICO, args.bias)
            coupled = couple_phase_qubits(net, q1, q2, width=args.width)
        else:
            for key in ("ng1", "ng2"):
                _require(0 <= getattr(args, key) <= 1, key, "must lie in [0, 1]")
            coupled = couple_charge_qubits(net, (args.ej1, args.ej2), (args.ng1, args.ng2))
        meta = {"arch": arch, **_scalar_couplings(coupled.couplings)}
        return Table(cols, _matrix_rows(coupled.interaction), meta)
    if arch == "makhlin":
        _require(args.n_qubits >= 2, "n-qubits", "must be at least 2")
        for key in ("inductance_nH", "cqb_pF", "cj_pF"):
            _require(getattr(args, key) > 0, key.replace("_", "-"), "must be positive")
        qubits = [ChargeSpin(args.ec, args.ej, args.ng) for _ in range(args.n_qubits)]
        reg = makhlin_register(qubits, args.inductance_nH * 1e-9, args.cqb_pF * PICO, args.cj_pF * PICO)
        coeff = next(iter(reg.couplings["pairs"].values()))
        meta = {"arch": arch, "coupling": coeff, "omega_lc": reg.couplings["omega_lc"]}
        return Table(cols, _matrix_rows(reg.interaction), meta)
    # transformer
    _require(0 < args.ratio < 0.5, "ratio", "must lie in (0, 0.5)")
    _require(args.ec > 0, "ec", "must be positive")
    circuit = TransformerCircuit(
        ChargeSpin(1.0, 0.1), ChargeSpin(1.0, 0.1), args.ec, args.ej, args.ratio, args.q0, n_q=args.n_q
    )
    if args.sweep_q0:
        qs = parse_range(args.sweep_q0, "sweep-q0")
        curve = circuit.curve
        rows = [[q, *transformer_couplings(curve, q, args.ratio)] for q in qs]
        roots = b_zero_crossings(curve, args.ratio, qs[0], qs[-1], len(qs)) if len(qs) > 1 else []
        meta = {"arch": arch, "ratio": args.ratio, "b_roots": roots}
        return Table(["q0", "a", "b"], rows, meta)
    eff = transformer_effective(circuit)
    meta = {"arch": arch, **_scalar_couplings(eff.couplings)}
    return Table(cols, _matrix_rows(eff.interaction), meta)


# --- evolve ----------------------------------------------------------------


def _resonator_from_args(args, g):
    _require(args.phonons >= 1, "phonons", "must be at least 1")
    _require(0 <= args.bias < 1, "bias", "must lie in [0, 1)")
    _require(args.ej_over_ec > 0, "ej-over-ec", "must be positive")
    sys_ = ResonatorSystem.harmonic(g, args.bias, args.ej_over_ec, args.phonons)
    if args.x00 is not None:
        x11 = args.x00 if args.x11 is None else args.x11
        sys_ = ResonatorSystem.two_level(g, sys_.x01, args.x00, x11, args.phonons)
    return sys_


def cmd_evolve(args):
    _require(args.g_over_gap > 0, "g-over-gap", "must be positive")
    _require(args.samples >= 2, "samples", "must be at least 2")
    sys_ = _resonator_from_args(args, args.g_over_gap)
    t_max = sys_.transfer_time if args.t_max is None else args.t_max
    _require(t_max > 0, "t-max", "must be positive")
    times = np.linspace(0.0, t_max, args.samples)
    trace = amplitudes(sys_, (1, 0), times, args.method.replace("-", "_"), check_cutoff=not args.no_cutoff_check)
    c10, c01 = trace.c(1, 0), trace.c(0, 1)
    rows = [
        [t, a.real, a.imag, b.real, b.imag, abs(a) ** 2, abs(b) ** 2, n]
        for t, a, b, n in zip(times, c10, c01, trace.norm)
    ]
    meta = {
        "g_over_gap": args.g_over_gap,
        "method": args.method,
        "phonons": args.phonons,
        "x01": sys_.x01,
        "x00": sys_.dipoles[0, 0],
        "transfer_time": sys_.transfer_time,
    }
    return Table(["t", "re_c10", "im_c10", "re_c01", "im_c01", "p10", "p01", "norm"], rows, meta)


# --- memory ----------------------------------------------------------------


def parse_state(tokens):
    """['equator'] | ['zero'] | ['one'] | ['custom', alpha, beta]."""
    tokens = list(tokens) if not isinstance(tokens, str) else tokens.split()
    name = tokens[0] if tokens else ""
    named = {"equator": EQUATOR, "zero": ZERO, "one": ONE}
    if name in named and len(tokens) == 1:
        return named[name]
    if name == "custom" and len(tokens) == 3:
        try:
            alpha, beta = complex(tokens[1]), complex(tokens[2])
        except ValueError:
            raise UsageError(f"state: cannot parse amplitudes {tokens[1:]}") from None
        _require(abs(alpha) > 0 or abs(beta) > 0, "state", "amplitudes must not both vanish")
        return alpha, beta
    raise UsageError(f"state: expected equator|zero|one|custom ALPHA BETA, got {' '.join(tokens)!r}")


def cmd_memory(args):
    gs = parse_range(args.sweep_g, "sweep-g")
    _require(np.all(gs > 0), "sweep-g", "coupling values must be positive")
    state = parse_state(args.state)
    template = _resonator_from_args(args, float(gs[0]))
    rows = sweep_fidelity(
        template,
        gs,
        state,
        optimize=args.optimize,
        method=args.method.replace("-", "_"),
        seed=args.seed,
        restarts=args.restarts,
        phase_free=args.phase_free,
    )
    return rows


# --- parser ----------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(prog="jjarch", description="Josephson-junction qubit models and dynamics.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="key=value file; command-line flags override it")
        p.add_argument("--output", help="output file (relative paths go under $%s if set)" % OUTPUT_DIR_ENV)
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("qubit-spectrum", help="single-qubit levels and spin parameters")
    common(p)
    p.add_argument("--type", choices=("phase", "charge", "flux"), required=True)
    p.add_argument("--i0-uA", dest="i0_uA", type=float)
    p.add_argument("--c-pF", dest="c_pF", type=float)
    p.add_argument("--ej", type=float, default=1e4)
    p.add_argument("--ec", type=float, default=1.0)
    p.add_argument("--bias", type=float, default=0.0)
    p.add_argument("--levels", type=int, default=2)
    p.add_argument("--ng", type=float, default=0.5)
    p.add_argument("--ng-scan")
    p.add_argument("--n-cutoff", type=int, default=10)
    p.add_argument("--flux", type=float, default=0.5)
    p.add_argument("--flux-scan")
    p.add_argument("--hbar-omega-lc", type=float, default=float(np.sqrt(20.0)))

    p = sub.add_parser("couple", help="two-qubit coupling constants and interaction matrices")
    common(p)
    p.add_argument("--arch", choices=("phase-cap", "charge-cap", "makhlin", "transformer", "tunable-ej"), required=True)
    p.add_argument("--c1", type=float, default=1.0, help="pF")
    p.add_argument("--c2", type=float, default=1.0, help="pF")
    p.add_argument("--cint", type=float, default=0.01, help="pF")
    p.add_argument("--cg1", type=float, default=0.0, help="pF")
    p.add_argument("--cg2", type=float, default=0.0, help="pF")
    p.add_argument("--i0-uA", dest="i0_uA", type=float, default=1.0)
    p.add_argument("--bias", type=float, default=0.0)
    p.add_argument("--width", choices=("printed", "harmonic"), default="printed")
    p.add_argument("--ej1", type=float, default=1e-5, help="eV")
    p.add_argument("--ej2", type=float, default=1e-5, help="eV")
    p.add_argument("--ng1", type=float, default=0.5)
    p.add_argument("--ng2", type=float, default=0.5)
    p.add_argument("--ej", type=float, default=0.3)
    p.add_argument("--ec", type=float, default=1.0)
    p.add_argument("--ng", type=float, default=0.5)
    p.add_argument("--n-qubits", type=int, default=2)
    p.add_argument("--inductance-nH", dest="inductance_nH", type=float, default=1.0)
    p.add_argument("--cqb-pF", dest="cqb_pF", type=float, default=0.001)
    p.add_argument("--cj-pF", dest="cj_pF", type=float, default=0.001)
    p.add_argument("--ratio", type=float, default=0.1)
    p.add_argument("--q0", type=float, default=0.0)
    p.add_argument("--n-q", type=int, default=401)
    p.add_argument("--sweep-q0")
    p.add_argument("--ej0", type=float, default=1.0)
    p.add_argument("--flux-ratio", type=float, default=0.0)

    def resonator(p):
        p.add_argument("--phonons", type=int, default=5)
        p.add_argument("--bias", type=float, default=0.32)
        p.add_argument("--ej-over-ec", type=float, default=1e4)
        p.add_argument("--x00", type=float)
        p.add_argument("--x11", type=float)

    p = sub.add_parser("evolve", help="junction-resonator amplitudes c_mn(t)")
    common(p)
    resonator(p)
    p.add_argument("--g-over-gap", type=float, required=True)
    p.add_argument("--method", choices=("exact", "rwa", "dressed-pt"), default="exact")
    p.add_argument("--t-max", type=float)
    p.add_argument("--samples", type=int, default=201)
    p.add_argument("--no-cutoff-check", type=_bool, nargs="?", const=True, default=False)

    p = sub.add_parser("memory", help="store/retrieve fidelity sweep")
    common(p)
    resonator(p)
    p.set_defaults(phonons=10)
    p.add_argument("--sweep-g", default="0.01:0.30:30")
    p.add_argument("--state", nargs="+", default=["equator"])
    p.add_argument("--optimize", type=_bool, nargs="?", const=True, default=False)
    p.add_argument("--phase-free", type=_bool, nargs="?", const=True, default=False)
    p.add_argument("--method", choices=("exact", "rwa", "dressed-pt"), default="exact")
    p.add_argument("--restarts", type=int, default=5)
    return parser


def _subparser(parser, command):
    for action in parser._subparsers._group_actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[command]
    raise KeyError(command)


def _apply_config(subparser, entries):
    """Validate config keys against the subcommand's flags and set defaults."""
    actions = {a.dest: a for a in subparser._actions if a.dest not in ("help", "config")}
    defaults = {}
    for key, raw in entries.items():
        if key not in actions:
            raise UsageError(f"{key}: unknown configuration key for this command")
        action = actions[key]
        try:
            if action.nargs == "+":
                value = raw.split()
            elif action.type is not None:
                value = action.type(raw)
            else:
                value = raw
        except (ValueError, argparse.ArgumentTypeError):
            raise UsageError(f"{key}: invalid value {raw!r}") from None
        if action.choices is not None and value not in action.choices:
            raise UsageError(f"{key}: must be one of {sorted(action.choices)}")
        defaults[key] = value
    subparser.set_defaults(**defaults)
    for action in subparser._actions:
        if action.dest in defaults and action.required:
            action.required = False


def parse_args(argv=None):
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("command", nargs="?")
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if known.config and known.command:
        try:
            sub = _subparser(parser, known.command)
        except KeyError:
            sub = None
        if sub is not None:
            _apply_config(sub, read_config(known.config))
    return parser.parse_args(argv)


# --- output ----------------------------------------------------------------


def _fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_number(value)
    if isinstance(value, (list, tuple)):
        return ";".join(_fmt(v) for v in value)
    return str(value)


def _json_value(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(format_number(value))
        return v if np.isfinite(v) else str(v)
    if isinstance(value, (list, tuple)):
        return [_json_value(v) for v in value]
    return str(value)


def render(table, fmt="csv", command=""):
    if fmt == "json":
        doc = {
            "command": command,
            "meta": {k: _json_value(v) for k, v in table.meta.items()},
            "columns": list(table.columns),
            "rows": [[_json_value(v) for v in row] for row in table.rows],
        }
        return json.dumps(doc, indent=1) + "\n"
    lines = [f"# {k}={_fmt(v)}" for k, v in table.meta.items()]
    lines.append(",".join(table.columns))
    lines.extend(",".join(_fmt(v) for v in row) for row in table.rows)
    return "\n".join(lines) + "\n"


def read_table(text):
    """Parse text produced by :func:`render` (either format) into a Table."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        doc = json.loads(stripped)
        return Table(doc["columns"], doc["rows"], doc["meta"])
    meta, rows, columns = {}, [], None
    for line in text.splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            meta[key] = value
        elif columns is None:
            columns = line.split(",")
        else:
            rows.append([float(v) for v in line.split(",")])
    return Table(columns or [], rows, meta)


def _destination(args, command):
    out_dir = os.environ.get(OUTPUT_DIR_ENV)
    if args.output:
        if out_dir and not os.path.isabs(args.output):
            return os.path.join(out_dir, args.output)
        return args.output
    if out_dir:
        return os.path.join(out_dir, f"{command}.{args.format}")
    return None


COMMANDS = {
    "qubit-spectrum": cmd_qubit_spectrum,
    "couple": cmd_couple,
    "evolve": cmd_evolve,
    "memory": cmd_memory,
}


def run(args):
    """Dispatch and return the rendered output text."""
    result = COMMANDS[args.command](args)
    if args.command == "memory":
        if args.format == "csv":
            return write_golden(result)
        table = Table(["g_over_gap", "F2_rwa", "F2_opt", "t_f_rwa", "t_f_opt"], [r.as_tuple() for r in result])
        return render(table, "json", args.command)
    return render(result, args.format, args.command)


def main(argv=None):
    try:
        args = parse_args(argv)
        text = run(args)
        dest = _destination(args, args.command)
        if dest is None:
            sys.stdout.write(text)
        else:
            parent = os.path.dirname(dest)
            if parent:
                os.makedirs(parent, exist_ok=True)
            with open(dest, "w", newline="") as fh:
                fh.write(text)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    except UsageError as exc:
        print(f"jjarch: error: {exc}", file=sys.stderr)
        return 2
    except (JJArchError, ValueError, OSError) as exc:
        print(f"jjarch: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
