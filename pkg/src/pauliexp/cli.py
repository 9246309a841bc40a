"""Command-line front end.

Subcommands: exp, partition, gibbs, verify, bench, decompose, closure.
Exit codes: 0 success, 1 parse/config error, 2 closure explosion,
3 numerical failure (including a failed verify). Error messages name the
failing stage on stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass

import numpy as np

from .dense import (
    DENSE_CAP_DEFAULT,
    compare,
    dense_exp,
    dense_to_bytes,
    dense_to_json,
    read_dense,
    reconstruct_dense,
)
from .engine import (
    ContourSpec,
    exp_contour,
    exp_pauli,
    exp_spectral,
    gibbs_state,
    is_pairwise_anticommuting,
    partition_function,
)
from .errors import ClosureExplosion, ContourError, FormatError, SingularSystem
from .hamiltonian import (
    DEFAULT_CLOSURE_CAP,
    PauliExpansion,
    SparseHamiltonian,
    close,
    close_codes,
    expansion_to_dict,
    format_hamiltonian_text,
    load_hamiltonian,
    pauli_decompose,
)
from .pauli import PauliString, format_string

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CLOSURE = 2
EXIT_NUMERICAL = 3

_G = "%.17g"


@dataclass
class RunConfig:
    """Resolved knobs shared by the computation subcommands."""

    input: str
    beta: complex
    method: str = "auto"
    out_format: str = "pauli-text"
    closure_cap: int = DEFAULT_CLOSURE_CAP
    nodes: int | None = None
    center: complex | None = None
    radius: float | None = None
    dense_cap: int = DENSE_CAP_DEFAULT
    zero_tol: float = 1e-12


def parse_beta(text: str) -> complex:
    """Accepts "1.5", "1.5+0.3i", "i", "-2i" (j works too)."""
    s = text.strip().replace(" ", "").replace("i", "j").replace("I", "j")
    try:
        b = complex(s)
    except ValueError:
        raise FormatError(f"cannot parse beta {text!r}") from None
    if not (math.isfinite(b.real) and math.isfinite(b.imag)):
        raise FormatError(f"beta must be finite, got {text!r}")
    return b


def _beta_from_args(args) -> complex:
    if args.time is not None:
        return 1j * args.time
    return parse_beta(args.beta)


def _format_complex(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}i"


def _emit_text(args, text: str):
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_bytes(args, blob: bytes):
    if getattr(args, "output", None):
        with open(args.output, "wb") as fh:
            fh.write(blob)
    else:
        sys.stdout.buffer.write(blob)


def _as_expansion(obj) -> PauliExpansion:
    if isinstance(obj, PauliExpansion):
        return obj
    coeffs: dict[int, complex] = {0: complex(obj.identity_offset)}
    coeffs.update({k: complex(v) for k, v in obj.terms.items()})
    return PauliExpansion(obj.n, coeffs)


def _expansion_text(e: PauliExpansion, beta: complex, method: str, alphabet: str) -> str:
    lines = [
        f"# n {e.n}",
        f"# beta {_format_complex(beta)}",
        f"# method {method}",
    ]
    for code in e.support:
        p = format_string(PauliString(e.n, code), alphabet)
        c = e.coeffs[code]
        lines.append(f"{p} {c.real:.17g} {c.imag:.17g}")
    return "\n".join(lines) + "\n"


def cmd_exp(args) -> int:
    cfg = RunConfig(
        input=args.input,
        beta=_beta_from_args(args),
        method=args.method,
        out_format=args.format,
        closure_cap=args.closure_cap,
        nodes=args.nodes,
        center=parse_beta(args.center) if args.center is not None else None,
        radius=args.radius,
        dense_cap=args.dense_cap,
        zero_tol=args.zero_tol,
    )
    h = load_hamiltonian(cfg.input)
    if cfg.method == "dense":
        m = dense_exp(reconstruct_dense(h, cfg.dense_cap), cfg.beta)
        e = _as_expansion(pauli_decompose(m, zero_tol=cfg.zero_tol))
        method = "dense"
    else:
        contour = None
        if (cfg.center is None) != (cfg.radius is None):
            raise FormatError("--center and --radius must be given together")
        if cfg.center is not None:
            contour = ContourSpec(cfg.center, cfg.radius, cfg.nodes or 64)
        if cfg.method == "contour":
            e = exp_contour(h, cfg.beta, contour=contour, cap=cfg.closure_cap,
                            nodes=cfg.nodes)
            method = "contour"
        else:
            e = exp_pauli(h, cfg.beta, method=cfg.method, cap=cfg.closure_cap)
            method = cfg.method
            if method == "auto":
                method = "anticommute" if is_pairwise_anticommuting(h) else "spectral"
    if cfg.out_format == "pauli-text":
        _emit_text(args, _expansion_text(e, cfg.beta, method, args.alphabet))
    elif cfg.out_format == "pauli-json":
        doc = expansion_to_dict(e, cfg.beta, args.alphabet)
        doc["method"] = method
        _emit_text(args, json.dumps(doc) + "\n")
    elif cfg.out_format == "dense-json":
        _emit_text(args, dense_to_json(reconstruct_dense(e, cfg.dense_cap)) + "\n")
    elif cfg.out_format == "dense-bin":
        _emit_bytes(args, dense_to_bytes(reconstruct_dense(e, cfg.dense_cap)))
    else:
        raise FormatError(f"unknown format {cfg.out_format!r}")
    return EXIT_OK


def cmd_partition(args) -> int:
    h = load_hamiltonian(args.input)
    try:
        betas = [float(tok) for tok in args.betas.split(",") if tok.strip()]
    except ValueError:
        raise FormatError(f"cannot parse --betas {args.betas!r}") from None
    if not betas:
        raise FormatError("--betas is empty")
    rows = []
    for beta in betas:
        z_norm, z_trace = partition_function(h, beta, args.closure_cap)
        z_norm, z_trace = z_norm.real, z_trace.real
        free_energy = None if beta == 0.0 else -math.log(z_trace) / beta
        row = {"beta": beta, "z_normalized": z_norm, "z_trace": z_trace,
               "free_energy": free_energy}
        if args.gibbs:
            g = gibbs_state(h, beta, args.closure_cap)
            row["gibbs"] = expansion_to_dict(g, alphabet=args.alphabet)
        rows.append(row)
    symmetry = None
    if args.symmetry_check:
        other = load_hamiltonian(args.symmetry_check)
        worst = 0.0
        for row in rows:
            z2 = partition_function(other, row["beta"], args.closure_cap)[1].real
            denom = max(abs(row["z_trace"]), abs(z2))
            worst = max(worst, abs(row["z_trace"] - z2) / denom if denom else 0.0)
        symmetry = worst
    if args.format == "json":
        doc = {"rows": rows}
        if symmetry is not None:
            doc["symmetry_max_rel_diff"] = symmetry
        _emit_text(args, json.dumps(doc) + "\n")
    else:
        lines = ["beta z_normalized z_trace free_energy"]
        for row in rows:
            fe = "n/a" if row["free_energy"] is None else _G % row["free_energy"]
            lines.append(
                f"{row['beta']:.17g} {row['z_normalized']:.17g} "
                f"{row['z_trace']:.17g} {fe}"
            )
            if args.gibbs:
                for entry in row["gibbs"]["coeffs"]:
                    lines.append(
                        f"gibbs {row['beta']:.17g} {entry['pauli']} "
                        f"{entry['re']:.17g} {entry['im']:.17g}"
                    )
        if symmetry is not None:
            verdict = "OK" if symmetry <= 1e-10 else "VIOLATED"
            lines.append(f"symmetry {verdict} max_rel_diff {symmetry:.17g}")
        _emit_text(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_gibbs(args) -> int:
    h = load_hamiltonian(args.input)
    g = gibbs_state(h, args.beta, args.closure_cap)
    if args.format == "pauli-json":
        doc = expansion_to_dict(g, alphabet=args.alphabet)
        doc["beta"] = {"re": args.beta, "im": 0.0}
        _emit_text(args, json.dumps(doc) + "\n")
    else:
        _emit_text(args, _expansion_text(g, args.beta, "gibbs", args.alphabet))
    return EXIT_OK


def cmd_verify(args) -> int:
    h = load_hamiltonian(args.input)
    beta = _beta_from_args(args)
    e = exp_pauli(h, beta, method=args.method, cap=args.closure_cap)
    approx = reconstruct_dense(e, args.dense_cap)
    exact = dense_exp(reconstruct_dense(h, args.dense_cap), beta)
    res = compare(approx, exact)
    tau = len(close(h, args.closure_cap))
    ok = res.max_abs <= args.tolerance
    verdict = "PASS" if ok else "FAIL"
    _emit_text(
        args,
        f"{verdict} n={h.n} tau={tau} method={args.method} "
        f"beta={_format_complex(beta)} max_abs={res.max_abs:.17g} "
        f"frobenius={res.frobenius:.17g} tol={args.tolerance:.17g}\n",
    )
    return EXIT_OK if ok else EXIT_NUMERICAL


def _bench_pattern(n: int) -> SparseHamiltonian:
    """Three-generator pattern spanning all n qubits, closure size 7."""
    all_x = int("1" * n, 4)
    all_z = int("3" * n, 4)
    x_first = 1 << (2 * (n - 1))
    gens = [all_x, all_z, x_first]
    ts = close_codes(n, gens)
    rng = np.random.default_rng(7)
    values = rng.uniform(-1.0, 1.0, size=len(ts))
    return SparseHamiltonian(n, {int(c): float(v) for c, v in zip(ts.codes, values)})


def _random_closed_hamiltonian(n: int, rank: int, seed: int) -> SparseHamiltonian:
    rng = np.random.default_rng(seed)
    while True:
        gens = [int(rng.integers(1, 4**n)) for _ in range(rank)]
        ts = close_codes(n, gens, cap=2 ** (2 * n))
        if len(ts) == 2**rank - 1:
            break
    values = rng.uniform(-1.0, 1.0, size=len(ts))
    return SparseHamiltonian(n, {int(c): float(v) for c, v in zip(ts.codes, values)})


def _time_call(fn, repeats: int, warmup: bool = True) -> float:
    if warmup:  # JIT compilation, caches
        fn()
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cmd_bench(args) -> int:
    beta = args.beta
    rows: list[tuple[int, int, float]] = []
    if args.suite == "spectral-n":
        n_list = [int(t) for t in args.n_list.split(",")]
        for n in n_list:
            h = _bench_pattern(n)
            dt = _time_call(lambda: exp_spectral(h, beta, args.closure_cap), args.repeats)
            rows.append((n, len(h.terms), dt))
    elif args.suite == "spectral-tau":
        n = args.n
        tau_list = [int(t) for t in args.tau_list.split(",")]
        for k, tau in enumerate(tau_list):
            rank = (tau + 1).bit_length() - 1
            if 2**rank - 1 != tau:
                raise FormatError(f"tau must be 2^k - 1 for a closed set, got {tau}")
            h = _random_closed_hamiltonian(n, rank, seed=100 + k)
            dt = _time_call(lambda: exp_spectral(h, beta, args.closure_cap), args.repeats)
            rows.append((n, tau, dt))
    elif args.suite == "dense-n":
        n_list = [int(t) for t in args.n_list.split(",")]
        for n in n_list:
            h = _bench_pattern(n)
            # no JIT in the dense path and repeated 2**n eigh calls are slow
            dt = _time_call(
                lambda: dense_exp(reconstruct_dense(h, args.dense_cap), beta),
                args.repeats,
                warmup=False,
            )
            rows.append((n, len(h.terms), dt))
    else:
        raise FormatError(f"unknown suite {args.suite!r}")
    lines = ["n,tau,wall_time_s"]
    lines += [f"{n},{tau},{dt:.9f}" for n, tau, dt in rows]
    _emit_text(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_decompose(args) -> int:
    m = read_dense(args.input)
    obj = pauli_decompose(m, zero_tol=args.zero_tol)
    if isinstance(obj, SparseHamiltonian):
        if args.format == "json":
            terms = []
            if obj.identity_offset != 0.0:
                ident = format_string(PauliString.identity(obj.n), args.alphabet)
                terms.append({"coeff": obj.identity_offset, "pauli": ident})
            terms += [
                {"coeff": obj.terms[c],
                 "pauli": format_string(PauliString(obj.n, c), args.alphabet)}
                for c in obj.support
            ]
            _emit_text(args, json.dumps({"n": obj.n, "terms": terms}) + "\n")
        else:
            _emit_text(args, format_hamiltonian_text(obj, args.alphabet))
    else:
        if args.format == "json":
            _emit_text(args, json.dumps(expansion_to_dict(obj, alphabet=args.alphabet)) + "\n")
        else:
            lines = [f"# n {obj.n}", "# method decompose"]
            for code in obj.support:
                p = format_string(PauliString(obj.n, code), args.alphabet)
                c = obj.coeffs[code]
                lines.append(f"{p} {c.real:.17g} {c.imag:.17g}")
            _emit_text(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_closure(args) -> int:
    h = load_hamiltonian(args.input)
    ts = close(h, args.closure_cap)
    if args.format == "json":
        doc = {
            "n": ts.n,
            "tau": ts.tau,
            "codes": [format_string(PauliString(ts.n, int(c)), args.alphabet)
                       for c in ts.codes],
        }
        _emit_text(args, json.dumps(doc) + "\n")
    else:
        lines = [f"n {ts.n}", f"tau {ts.tau}"]
        lines += [format_string(PauliString(ts.n, int(c)), args.alphabet)
                  for c in ts.codes]
        _emit_text(args, "\n".join(lines) + "\n")
    return EXIT_OK


def _add_common(p):
    p.add_argument("-i", "--input", required=True, help="Hamiltonian file (text or JSON)")
    p.add_argument("-o", "--output", help="write result here instead of stdout")
    p.add_argument("--closure-cap", type=int, default=DEFAULT_CLOSURE_CAP,
                   help="abort if the closed set grows past this (default %(default)s)")
    p.add_argument("--alphabet", choices=("digits", "letters"), default="digits",
                   help="render Pauli strings as 0123 digits or IXYZ letters")


def _add_beta(p):
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--beta", help='inverse temperature, e.g. "1.5", "0.5+0.2i", "i"')
    grp.add_argument("--time", type=float, help="real time t, shorthand for beta = i t")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pauliexp",
        description="exp(-beta H) for sparse Pauli-basis Hamiltonians",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exp", help="compute exp(-beta H) as a Pauli expansion")
    _add_common(p)
    _add_beta(p)
    p.add_argument("--method", choices=("auto", "spectral", "contour", "anticommute", "dense"),
                   default="auto")
    p.add_argument("--format", choices=("pauli-json", "pauli-text", "dense-json", "dense-bin"),
                   default="pauli-text")
    p.add_argument("--nodes", type=int, default=None, help="contour quadrature nodes")
    p.add_argument("--center", default=None, help="contour center (complex)")
    p.add_argument("--radius", type=float, default=None, help="contour radius")
    p.add_argument("--dense-cap", type=int, default=DENSE_CAP_DEFAULT)
    p.add_argument("--zero-tol", type=float, default=1e-12)
    p.set_defaults(func=cmd_exp)

    p = sub.add_parser("partition", help="partition function over a real beta grid")
    _add_common(p)
    p.add_argument("--betas", required=True, help='comma-separated real betas, e.g. "0.1,1,5"')
    p.add_argument("--gibbs", action="store_true", help="also emit Gibbs coefficients per beta")
    p.add_argument("--symmetry-check", metavar="PATH",
                   help="second Hamiltonian file; report whether Z matches the input's")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("gibbs", help="Gibbs state expansion exp(-beta H)/Z")
    _add_common(p)
    p.add_argument("--beta", type=float, required=True, help="real inverse temperature")
    p.add_argument("--format", choices=("pauli-json", "pauli-text"), default="pauli-text")
    p.set_defaults(func=cmd_gibbs)

    p = sub.add_parser("verify", help="compare a sparse path against the dense oracle")
    _add_common(p)
    _add_beta(p)
    p.add_argument("--method", choices=("auto", "spectral", "contour", "anticommute"),
                   default="spectral")
    p.add_argument("--tolerance", type=float, default=1e-10)
    p.add_argument("--dense-cap", type=int, default=DENSE_CAP_DEFAULT)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="wall-time sweeps, CSV output")
    p.add_argument("--suite", choices=("spectral-n", "spectral-tau", "dense-n"),
                   default="spectral-n")
    p.add_argument("--n-list", default="4,6,8,10,12", help="qubit counts (spectral-n, dense-n)")
    p.add_argument("--n", type=int, default=10, help="fixed qubit count (spectral-tau)")
    p.add_argument("--tau-list", default="3,7,15,31,63", help="closed-set sizes (spectral-tau)")
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--closure-cap", type=int, default=DEFAULT_CLOSURE_CAP)
    p.add_argument("--dense-cap", type=int, default=DENSE_CAP_DEFAULT)
    p.add_argument("-o", "--output", help="write CSV here instead of stdout")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("decompose", help="dense matrix file -> Pauli terms")
    p.add_argument("-i", "--input", required=True, help="dense matrix (.json or PEXP binary)")
    p.add_argument("-o", "--output")
    p.add_argument("--zero-tol", type=float, default=1e-12)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--alphabet", choices=("digits", "letters"), default="digits")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("closure", help="report the closed term set and tau")
    _add_common(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_closure)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"pauliexp: input error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ClosureExplosion as exc:
        print(f"pauliexp: closure error: {exc}", file=sys.stderr)
        return EXIT_CLOSURE
    except (SingularSystem, ContourError) as exc:
        print(f"pauliexp: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"pauliexp: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"pauliexp: io error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
