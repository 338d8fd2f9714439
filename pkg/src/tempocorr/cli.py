"""Command-line front end.

Exit codes: 0 success, 2 parse/validation error, 3 CPTP failure,
4 unsupported operation.
"""
import argparse
import io
import json
import sys

import numpy as np

from . import __version__, _kernels, channels, qmath
from .channelspec import (SPEC_FORMAT, ChannelSpec, SpecError, decode_matrix, dumps, encode_matrix, load_spec,
                          spec_for_channel, write_spec)
from .errors import TempoCorrError
from .protocol import analytic_joint, run_protocol
from .quantifier import DEFAULT_RESTARTS, q_fixed_basis, q_inf, q_sweep
from .states import BasisPair, DensityMatrix, max_coherent
from .tomography import channel_from_choi_state, choi_marginal_defect, measure, product_observable_basis, reconstruct

EXIT_OK, EXIT_PARSE, EXIT_CPTP, EXIT_UNSUPPORTED = 0, 2, 3, 4
DEFAULT_EPS_GRID = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1"


class CliError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _zoo():
    return {
        "identity": ChannelSpec("identity", 2, 2, "unitary", encode_matrix(np.eye(2))),
        "pauli_x": ChannelSpec("pauli_x", 2, 2, "unitary", encode_matrix(channels.PAULI["X"])),
        "pauli_y": ChannelSpec("pauli_y", 2, 2, "unitary", encode_matrix(channels.PAULI["Y"])),
        "pauli_z": ChannelSpec("pauli_z", 2, 2, "unitary", encode_matrix(channels.PAULI["Z"])),
        "hadamard": ChannelSpec("hadamard", 2, 2, "unitary", encode_matrix(channels.HADAMARD)),
        "dephasing": ChannelSpec("dephasing", 2, 2, "coherence_destroying", [[1.0, 0.0], [0.0, 1.0]]),
        "coherence_destroying": ChannelSpec("coherence_destroying", 2, 2, "coherence_destroying",
                                            [[0.7, 0.3], [0.2, 0.8]]),
        "coherence_destroying_uniform": ChannelSpec("coherence_destroying_uniform", 2, 2,
                                                    "coherence_destroying", [[0.5, 0.5], [0.5, 0.5]]),
        "depolarized_unitary": ChannelSpec("depolarized_unitary", 2, 2, "depolarized_unitary",
                                           {"matrix": encode_matrix(np.eye(2)), "eps": 0.1}),
        "amplitude_damping": spec_for_channel("amplitude_damping", channels.amplitude_damping(0.3)),
    }


ZOO_NAMES = tuple(_zoo())


def _envelope(command, inputs, outputs):
    return {
        "command": command,
        "inputs": inputs,
        "outputs": outputs,
        "versions": {"tempocorr": __version__, "spec_format": SPEC_FORMAT, "kernel_backend": _kernels.backend_name()},
    }


def _load_channel(path, require_cptp=True):
    try:
        spec = load_spec(path)
        ch = spec.to_channel()
    except SpecError as exc:
        raise CliError(EXIT_PARSE, str(exc)) from exc
    verdict = channels.is_cptp(ch)
    if require_cptp and not verdict.ok:
        raise CliError(EXIT_CPTP, f"channel {spec.name!r} is not CPTP "
                                  f"(min eigenvalue {verdict.min_eigenvalue:.3e}, tp defect {verdict.tp_defect:.3e})")
    return spec, ch, verdict


def _verdict_dict(v):
    return {"cptp": bool(v.ok), "min_choi_eigenvalue": v.min_eigenvalue, "tp_defect": v.tp_defect}


def _csv(rows, header):
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(format(x, ".17g") if isinstance(x, float) else str(x) for x in row) + "\n")
    return buf.getvalue()


def cmd_analyze(args):
    spec, ch, verdict = _load_channel(args.spec, require_cptp=False)
    bases = None if args.basis_seed is None else BasisPair.random(ch.d_in, ch.d_out, seed=args.basis_seed)
    choi = channels.choi_matrix(ch, None if bases is None else bases.b0)
    inputs = {"spec": spec.to_dict(), "basis_seed": args.basis_seed}
    outputs = {"cptp": _verdict_dict(verdict), "choi": encode_matrix(choi), "choi_purity": qmath.purity(choi)}
    code = EXIT_OK
    if not verdict.ok:
        code = EXIT_CPTP
    elif ch.d_in == ch.d_out:
        outputs["q_fixed_basis"] = q_fixed_basis(ch, bases).to_dict()
    if args.csv:
        rows = [("choi_purity", outputs["choi_purity"]), ("cptp", int(verdict.ok)),
                ("min_choi_eigenvalue", verdict.min_eigenvalue), ("tp_defect", verdict.tp_defect)]
        if "q_fixed_basis" in outputs:
            rows.append(("q", outputs["q_fixed_basis"]["q_value"]))
        return code, _csv(rows, ("quantity", "value"))
    return code, dumps(_envelope("analyze", inputs, outputs))


def _parse_state(text, d):
    text = text.strip()
    if text == "mu":
        return None
    if text.isdigit():
        k = int(text)
        if k >= d:
            raise CliError(EXIT_PARSE, f"basis index {k} out of range for d={d}")
        return ("index", k)
    try:
        data = np.asarray(json.loads(text), dtype=float)
    except (ValueError, TypeError) as exc:
        raise CliError(EXIT_PARSE, f"cannot parse state {text!r}") from exc
    vec = data[:, 0] + 1j * data[:, 1] if data.ndim == 2 else data.astype(complex)
    if vec.size != d or np.linalg.norm(vec) == 0:
        raise CliError(EXIT_PARSE, f"state vector must have {d} nonzero entries")
    return ("vector", vec / np.linalg.norm(vec))


def cmd_protocol(args):
    spec, ch, _ = _load_channel(args.spec)
    if args.d is not None and args.d != ch.d_in:
        raise CliError(EXIT_PARSE, f"--d {args.d} does not match channel input dimension {ch.d_in}")
    bases = (BasisPair.computational(ch.d_in, ch.d_out) if args.seed is None
             else BasisPair.random(ch.d_in, ch.d_out, seed=args.seed))
    parsed = _parse_state(args.state, ch.d_in)
    if parsed is None:
        vec = max_coherent(ch.d_in, bases.b0).vec
    elif parsed[0] == "index":
        vec = bases.b0[:, parsed[1]]
    else:
        vec = parsed[1]
    rho0 = DensityMatrix(np.outer(vec, vec.conj()), (ch.d_in,))
    res = run_protocol(rho0, ch, bases)
    oracle = analytic_joint(rho0, ch, bases)
    outputs = {
        "success_prob": res.success_prob,
        "joint": encode_matrix(res.joint.mat),
        "deviation_from_analytic": float(np.max(np.abs(res.joint.mat - oracle.mat))),
    }
    if parsed is None:
        outputs["deviation_from_choi"] = float(np.max(np.abs(res.joint.mat - channels.choi_matrix(ch, bases.b0))))
    inputs = {"spec": spec.to_dict(), "state": args.state, "d": ch.d_in, "seed": args.seed}
    return EXIT_OK, dumps(_envelope("protocol", inputs, outputs))


def cmd_tomo(args):
    spec, ch, _ = _load_channel(args.spec)
    shots = "exact" if args.shots == "exact" else int(args.shots)
    d0, d1 = ch.d_in, ch.d_out
    basis = product_observable_basis(d0, d1)
    true_choi = channels.choi_matrix(ch)
    joint = run_protocol(max_coherent(d0).density(), ch).joint
    record = measure(joint, basis, shots=shots, seed=args.seed)
    est = reconstruct(record, basis)
    tol = 1e-6 if shots == "exact" else np.inf
    phi, recovered = channel_from_choi_state(est, tol=tol)
    outputs = {
        "reconstructed_choi": encode_matrix(est.mat),
        "trace_distance": qmath.trace_distance(est.mat, true_choi),
        "choi_marginal_defect": choi_marginal_defect(est.mat, d1, d0),
        "phi_matrix": [[encode_matrix(phi[k, l]) for l in range(d1)] for k in range(d1)],
        "extensional_error": channels.extensional_distance(ch, recovered),
        "record": record.to_dict(),
    }
    inputs = {"spec": spec.to_dict(), "shots": shots, "seed": args.seed}
    return EXIT_OK, dumps(_envelope("tomo", inputs, outputs))


def cmd_quantify(args):
    spec, ch, _ = _load_channel(args.spec)
    if ch.d_in != ch.d_out:
        raise CliError(EXIT_UNSUPPORTED, "the measure needs d_in == d_out")
    rep = q_inf(ch, restarts=args.restarts, seed=args.seed)
    inputs = {"spec": spec.to_dict(), "restarts": args.restarts, "seed": args.seed}
    if args.csv:
        rows = [(s, v) for s, v in rep.landscape_samples]
        return EXIT_OK, _csv(rows, ("seed", "value"))
    return EXIT_OK, dumps(_envelope("quantify", inputs, {"report": rep.to_dict()}))


def _parse_grid(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise CliError(EXIT_PARSE, f"bad --eps-grid {text!r}") from exc


def cmd_sweep(args):
    try:
        spec = load_spec(args.spec)
    except SpecError as exc:
        raise CliError(EXIT_PARSE, str(exc)) from exc
    if spec.kind != "depolarized_unitary":
        raise CliError(EXIT_UNSUPPORTED, f"sweep needs a depolarized_unitary spec, got {spec.kind!r}")
    spec_obj, ch, _ = _load_channel(args.spec)
    grid = _parse_grid(args.eps_grid)
    if any(not 0.0 <= e <= 1.0 for e in grid):
        raise CliError(EXIT_PARSE, "eps values must lie in [0, 1]")
    series = q_sweep(decode_matrix(spec.payload["matrix"]), grid, restarts=args.restarts, seed=args.seed)
    if args.csv:
        return EXIT_OK, _csv([(e, r.q_value) for e, r in series], ("eps", "q"))
    inputs = {"spec": spec_obj.to_dict(), "eps_grid": grid, "restarts": args.restarts, "seed": args.seed}
    outputs = {"series": [{"eps": e, "q": r.q_value, "kind": r.kind, "method": r.method,
                           "landscape_variance": r.landscape_variance()} for e, r in series]}
    return EXIT_OK, dumps(_envelope("sweep", inputs, outputs))


def cmd_zoo(args):
    zoo = _zoo()
    if args.list:
        return EXIT_OK, dumps(_envelope("zoo", {"list": True}, {"names": list(zoo)}))
    name, path = args.emit
    if name not in zoo:
        raise CliError(EXIT_PARSE, f"unknown channel {name!r}; known: {', '.join(zoo)}")
    write_spec(zoo[name], path)
    return EXIT_OK, dumps(_envelope("zoo", {"emit": name, "path": path}, {"spec": zoo[name].to_dict()}))


def build_parser():
    parser = argparse.ArgumentParser(prog="tempocorr", description="Two-time correlations as quantum channels.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="Choi state, CPTP diagnostics and fixed-basis measure")
    p.add_argument("spec")
    p.add_argument("--basis-seed", type=int, default=None)
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", default=True)
    fmt.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("protocol", help="simulate the ancilla protocol")
    p.add_argument("spec")
    p.add_argument("--state", default="mu", help="'mu', a basis index, or a JSON vector")
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--seed", type=int, default=None, help="seed for random bases (computational if omitted)")
    p.set_defaults(func=cmd_protocol)

    p = sub.add_parser("tomo", help="simulated tomography of the Choi state")
    p.add_argument("spec")
    p.add_argument("--shots", default="exact")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_tomo)

    p = sub.add_parser("quantify", help="infimum of the measure over bases")
    p.add_argument("spec")
    p.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_quantify)

    p = sub.add_parser("sweep", help="measure of the depolarized unitary over eps")
    p.add_argument("spec")
    p.add_argument("--eps-grid", default=DEFAULT_EPS_GRID)
    p.add_argument("--restarts", type=int, default=DEFAULT_RESTARTS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("zoo", help="list or emit built-in channel specs")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--list", action="store_true")
    g.add_argument("--emit", nargs=2, metavar=("NAME", "PATH"))
    p.set_defaults(func=cmd_zoo)
    return parser


def main(argv=None, stdout=None, stderr=None):
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    args = build_parser().parse_args(argv)
    try:
        code, text = args.func(args)
    except CliError as exc:
        stderr.write(f"tempocorr {args.command}: {exc}\n")
        return exc.code
    except TempoCorrError as exc:
        stderr.write(f"tempocorr {args.command}: {exc}\n")
        return EXIT_PARSE
    stdout.write(text)
    return code


def main_entry():
    sys.exit(main())
