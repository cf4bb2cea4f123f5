"""Command-line front end.

Exit codes: 0 positive verdict / pass, 1 negative verdict / tolerance
failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import __version__
from .decompose import decompose, verify_certificate
from .divisor import Divisor, a_matrix, asymmetric_entries, classify_pair, gram_sum, is_symmetric, periods
from .errors import ApDivisorError, NotSymmetricGramError, RDependentPairError
from .numerics import QuadratureParams, a_matrix_numeric, default_bump, lemma_dis_check
from .specfile import load_spec

SCHEMA = 1
EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2
COMMANDS = ("check", "decompose", "classify", "periods", "verify-numeric")


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: Path
    format: str = "text"
    output: Path | None = None
    params: QuadratureParams | None = None
    epsilon: float = 0.4

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.format not in ("text", "json"):
            raise ValueError(f"unknown format {self.format!r}")


def _matrix_text(rows) -> list[str]:
    cells = [[str(x) for x in r] for r in rows]
    width = max((len(c) for r in cells for c in r), default=1)
    return ["  [" + ", ".join(c.rjust(width) for c in r) + "]" for r in cells]


def _vec_text(v) -> str:
    return "[" + ", ".join(str(x) for x in v) + "]"


def _float_vec(v) -> list[float]:
    return [float(x) for x in v]


def _header(d: Divisor) -> list[str]:
    return [d.field.literal(), f"m = {d.m}", f"pairs = {len(d.pairs)}"]


def cmd_check(d: Divisor) -> tuple[int, dict, list[str]]:
    A = a_matrix(d)
    g = gram_sum(d)
    sym = is_symmetric(g)
    verdict = A.is_zero()
    data = {
        "a_matrix": [[str(x) for x in r] for r in A.entries],
        "gram_symmetric": sym,
        "asymmetric_entries": [[j + 1, k + 1] for j, k in asymmetric_entries(g)],
        "ap_modulus": verdict,
    }
    lines = _header(d) + ["A(d) ="] + _matrix_text(A.entries)
    lines.append(f"Gram symmetric: {'yes' if sym else 'no'}")
    lines.append(f"AP-modulus: {'YES' if verdict else 'NO'}")
    return (EXIT_OK if verdict else EXIT_NEGATIVE), data, lines


def cmd_decompose(d: Divisor, output: Path | None = None, fmt: str = "text") -> tuple[int, dict, list[str]]:
    try:
        pairs, cert = decompose(d)
    except NotSymmetricGramError as exc:
        data = {"error": "NotSymmetricGram", "message": str(exc),
                "asymmetric_entries": [[j + 1, k + 1] for j, k in exc.entries]}
        return EXIT_NEGATIVE, data, [f"NotSymmetricGram: {exc}"]
    ok = verify_certificate(d, pairs)
    data = {"verified": ok, "certificate": cert.as_dict(d)}
    lines = _header(d) + cert.lines(d) + [f"verified: {'yes' if ok else 'NO'}"]
    if output is not None and ok:
        if fmt == "json":
            output.write_text(json.dumps({"schema": SCHEMA, **cert.as_dict(d)}, indent=2, sort_keys=True) + "\n")
        else:
            output.write_text(cert.to_text(d))
    if not ok:
        # never emit an unverified certificate
        data = {"verified": False, "error": "certificate failed verification"}
        return EXIT_NEGATIVE, data, lines
    return EXIT_OK, data, lines


def cmd_classify(d: Divisor) -> tuple[int, dict, list[str]]:
    lines = _header(d)
    records = []
    for i, p in enumerate(d.pairs, 1):
        c = classify_pair(p.lam, p.mu)
        records.append({"pair": i, **c.as_dict()})
        kind = "periodic" if c.periodic else "almost-periodic, not periodic"
        flags = " ".join(f"{k}={'true' if v else 'false'}" for k, v in c.as_dict().items())
        lines.append(f"pair {i}: {flags} ({kind})")
    verdict = a_matrix(d).is_zero()
    lines.append(f"AP-modulus: {'YES' if verdict else 'NO'}")
    return EXIT_OK, {"pairs": records, "ap_modulus": verdict}, lines


def cmd_periods(d: Divisor) -> tuple[int, dict, list[str]]:
    lines = _header(d)
    records, code = [], EXIT_OK
    for i, p in enumerate(d.pairs, 1):
        try:
            p1, p2 = periods(p.lam, p.mu)
        except RDependentPairError as exc:
            code = EXIT_NEGATIVE
            records.append({"pair": i, "error": "RDependentPair", "message": str(exc)})
            lines.append(f"pair {i}: RDependentPair: {exc}")
            continue
        records.append({
            "pair": i,
            "P1": [str(x) for x in p1], "P2": [str(x) for x in p2],
            "P1_float": _float_vec(p1), "P2_float": _float_vec(p2),
        })
        lines.append(f"pair {i}: P1 = {_vec_text(p1)} ~ {_float_vec(p1)}")
        lines.append(f"        P2 = {_vec_text(p2)} ~ {_float_vec(p2)}")
    return code, {"pairs": records}, lines


def cmd_verify_numeric(d: Divisor, params: QuadratureParams, epsilon: float = 0.4) -> tuple[int, dict, list[str]]:
    tol = params.tolerance
    lines = _header(d) + [f"params: {params.as_dict()} epsilon={epsilon}"]
    data: dict = {"params": {**params.as_dict(), "epsilon": epsilon}}
    ok = True
    if d.m < 2:
        raise ApDivisorError("numeric verification needs m >= 2")
    if d.m == 2:
        rep = lemma_dis_check(default_bump(2, epsilon), params)
        passed = bool(rep.passed(tol))
        ok &= passed
        data["lemma_dis"] = {**rep.as_dict(), "passed": passed}
        lines.append(
            f"base case (e1,e2): value={rep.value:.8f} reference={rep.reference:.8f} "
            f"abs_error={rep.abs_error:.3e} rel_error={rep.rel_error:.3e} "
            f"estimate={rep.error_estimate:.3e} {'PASS' if passed else 'FAIL'}"
        )
    phi = default_bump(d.m, epsilon)
    records = []
    for i, p in enumerate(d.pairs, 1):
        exact = a_matrix(Divisor(d.field, d.m, (p,)))
        exact_f = [[float(x.to_real(Fraction(1, 10**12))) for x in r] for r in exact.entries]
        numeric = p.mult * a_matrix_numeric(p.lam, p.mu, phi, params)
        errors = [[float(abs(numeric[j][k] - exact_f[j][k])) for k in range(d.m)] for j in range(d.m)]
        worst = max(max(r) for r in errors)
        passed = bool(worst <= tol)
        ok &= passed
        records.append({
            "pair": i, "numeric": numeric.tolist(), "exact": exact_f,
            "errors": errors, "max_error": worst, "passed": passed,
        })
        lines.append(f"pair {i}: A numeric vs exact, max_error={worst:.3e} {'PASS' if passed else 'FAIL'}")
        for j in range(d.m):
            lines.append("  " + "  ".join(
                f"{numeric[j][k]:+.6f}/{exact_f[j][k]:+.6f} (err {errors[j][k]:.1e})" for k in range(d.m)
            ))
    data["pairs"] = records
    data["passed"] = bool(ok)
    lines.append("PASS" if ok else "FAIL")
    return (EXIT_OK if ok else EXIT_NEGATIVE), data, lines


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="apdivisor",
        description="Decide and certify when a combination of model divisors d[lambda,mu] "
        "is the divisor of a holomorphic function with almost-periodic modulus.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--input", "-i", required=True, type=Path, help="divisor spec file")
        p.add_argument("--format", "-f", choices=("text", "json"), default="text")

    for name, help_ in (
        ("check", "criterion A(d) = 0"),
        ("classify", "Q/R dependence and periodicity of each pair"),
        ("periods", "exact period vectors of each pair"),
    ):
        common(sub.add_parser(name, help=help_))
    p = sub.add_parser("decompose", help="certified decomposition into degenerate pairs")
    common(p)
    p.add_argument("--output", "-o", type=Path, help="write the certificate here")
    p = sub.add_parser("verify-numeric", help="quadrature check of the A-matrix")
    common(p)
    defaults = QuadratureParams()
    p.add_argument("--half-width", type=float, default=defaults.half_width)
    p.add_argument("--nodes", type=int, default=defaults.nodes)
    p.add_argument("--lattice-radius", type=float, default=None)
    p.add_argument("--epsilon", type=float, default=0.4)
    p.add_argument("--tolerance", type=float, default=defaults.tolerance)
    return parser


def _config(args) -> RunConfig:
    params = None
    if args.command == "verify-numeric":
        params = QuadratureParams(
            half_width=args.half_width, nodes=args.nodes,
            lattice_radius=args.lattice_radius, tolerance=args.tolerance,
        )
    return RunConfig(
        command=args.command, input=args.input, format=args.format,
        output=getattr(args, "output", None), params=params,
        epsilon=getattr(args, "epsilon", 0.4),
    )


def run(cfg: RunConfig) -> tuple[int, dict, list[str]]:
    d = load_spec(cfg.input)
    if cfg.command == "check":
        return cmd_check(d)
    if cfg.command == "decompose":
        return cmd_decompose(d, cfg.output, cfg.format)
    if cfg.command == "classify":
        return cmd_classify(d)
    if cfg.command == "periods":
        return cmd_periods(d)
    return cmd_verify_numeric(d, cfg.params or QuadratureParams(), cfg.epsilon)


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        code, data, lines = run(cfg)
    except (ApDivisorError, ValueError) as exc:
        code, data, lines = EXIT_INPUT, {"error": type(exc).__name__, "message": str(exc)}, [
            f"error: {type(exc).__name__}: {exc}"
        ]
        if args.format == "text":
            print(lines[0], file=sys.stderr)
            return code
    if args.format == "json":
        payload = {"schema": SCHEMA, "command": args.command, "exit_code": code, **data}
        stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        stdout.write("\n".join(lines) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
