"""Command-line surface: batch decisions, poset reports, DOT/JSON/CSV output.

Subcommands: strata-list, decide, sweep-length2, hasse, xi, census,
closed-form.  Exit codes: 0 success, 2 precondition violation, 3 budget
exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

from .fq import Fq, mat_inv
from .glnzip import (
    Signature,
    fp_point_census,
    length2_closed_form,
    verify_length2,
    xi_classify,
)
from .hasse import hasse_report
from .rootdata import TYPE_A_GL, RootDataError
from .strata import closure_codim1, decide_smooth, is_small, xi_of_weyl
from .weyl import DEFAULT_BUDGET, BudgetExceeded, WeylElement
from .zipdatum import (
    BasedAutomorphism,
    ZipDatum,
    ZipDatumError,
    make_zip_datum,
    zip_datum_from_json,
)

EXIT_OK = 0
EXIT_PRECONDITION = 2
EXIT_BUDGET = 3


@dataclass
class RunConfig:
    gl: tuple[int, int] | None
    cartan_file: str | None
    sigma: str
    I: list[int] | None
    m: int = 1
    q: int = 2
    seed: int = 0
    fmt: str = "json"
    budget: int = DEFAULT_BUDGET

    def datum(self) -> ZipDatum:
        if self.gl is not None:
            n, r = self.gl
            from .rootdata import build_gl

            rs, lattice, I = build_gl(n, r)
            sigma = _parse_sigma(rs, self.sigma)
            return make_zip_datum(rs, I, sigma, lattice, budget=self.budget)
        if self.cartan_file is None:
            raise ZipDatumError("specify a datum with --gl N R or --cartan FILE")
        with open(self.cartan_file) as fh:
            doc = json.load(fh)
        if self.I is not None:
            doc["I"] = self.I
        if self.sigma != "id":
            doc["sigma"] = self.sigma if self.sigma == "flip" else [
                int(x) for x in self.sigma.split(",")
            ]
        return zip_datum_from_json(doc, budget=self.budget)


def _parse_sigma(rs, spec: str) -> BasedAutomorphism:
    if spec == "id":
        return BasedAutomorphism.identity(rs)
    if spec == "flip":
        return BasedAutomorphism.flip(rs)
    return BasedAutomorphism(rs, [int(x) for x in spec.split(",")])


def _parse_element(zd: ZipDatum, text: str) -> WeylElement:
    """One-line '3,4,1,2' or reduced word 's1 s3' (words only, for generic)."""
    text = text.strip()
    if text in ("e", "id", "identity"):
        return zd.W.identity
    if text.startswith("s"):
        word = [int(tok.lstrip("s")) for tok in text.replace(",", " ").split()]
        return zd.W.from_word(word)
    if zd.rs.realization != TYPE_A_GL:
        raise ZipDatumError("one-line input is only available for type A; use 's1 s3'")
    return zd.W.from_one_line([int(x) for x in text.replace(",", " ").split()])


def _label(w: WeylElement):
    if w.group.rs.realization == TYPE_A_GL:
        return w.one_line()
    return [int(k) for k in w.word]


def _emit(payload, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=2, sort_keys=True)
    raise ZipDatumError(f"format {fmt!r} is not available for this report")


def cmd_strata_list(config: RunConfig) -> str:
    zd = config.datum()
    reps = zd.minimal_reps()
    nodes = []
    covers = []
    for w in reps:
        from .hasse import hasse_feasible

        feasible0 = hasse_feasible(zd, w, [0] * zd.lattice.dim).feasible
        nodes.append(
            {
                "w": _label(w),
                "length": w.length,
                "I_w": sorted(zd.canonical_type(w)),
                "small": is_small(zd, w),
                "hasse_feasible_at_0": feasible0,
            }
        )
        for v in zd.lower_neighbors(zd.I, w):
            covers.append({"upper": _label(w), "lower": _label(v)})
    payload = {"z": _label(zd.z), "J": sorted(zd.J), "nodes": nodes, "covers": covers}
    if config.fmt == "dot":
        return _to_dot(payload)
    return _emit(payload, config.fmt)


def _to_dot(payload: dict) -> str:
    def node_id(label) -> str:
        return "w_" + "_".join(str(x) for x in label)

    lines = ["digraph strata {", "  rankdir=BT;"]
    for node in payload["nodes"]:
        attrs = (
            f"{node['w']}\\nl={node['length']} I_w={node['I_w']}"
            f"\\nsmall={str(node['small']).lower()}"
            f" ha0={str(node['hasse_feasible_at_0']).lower()}"
        )
        lines.append(f'  {node_id(node["w"])} [label="{attrs}"];')
    for cover in payload["covers"]:
        lines.append(f'  {node_id(cover["lower"])} -> {node_id(cover["upper"])};')
    lines.append("}")
    return "\n".join(lines)


def cmd_decide(config: RunConfig, w_text: str, w_prime_text: str) -> str:
    zd = config.datum()
    w = _parse_element(zd, w_text)
    wp = _parse_element(zd, w_prime_text)
    verdict = decide_smooth(zd, w, wp)
    return _emit(verdict.to_json(), config.fmt)


def cmd_closure(config: RunConfig, w_text: str) -> str:
    zd = config.datum()
    w = _parse_element(zd, w_text)
    ok, verdicts = closure_codim1(zd, w)
    payload = {
        "w": _label(w),
        "smooth_in_codim_1": ok,
        "neighbors": {",".join(map(str, _label(k))): v.to_json() for k, v in verdicts.items()},
    }
    return _emit(payload, config.fmt)


def cmd_sweep_length2(config: RunConfig, n_max: int, verify: bool) -> str:
    rows = []
    for n in range(4, n_max + 1):
        for s in range(2, n // 2 + 1):
            sig = Signature(n - s, s)
            rows.append(verify_length2(sig) if verify else length2_closed_form(sig))
    if config.fmt == "csv":
        return _sweep_csv(rows)
    return _emit(rows, config.fmt)


def _sweep_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["r", "s", "n", "gcd", "branch", "U1_smooth", "U2_smooth"])
    for row in rows:
        writer.writerow(
            [row["r"], row["s"], row["n"], row["gcd"], row["branch"],
             row["U1"]["smooth"], row["U2"]["smooth"]]
        )
    return buf.getvalue()


def cmd_hasse(config: RunConfig, w_text: str | None, lam_text: str | None) -> str:
    zd = config.datum()
    lam = None if lam_text is None else [int(x) for x in lam_text.replace(",", " ").split()]
    if w_text is not None:
        return _emit(hasse_report(zd, _parse_element(zd, w_text), lam), config.fmt)
    reports = [hasse_report(zd, w, lam) for w in zd.minimal_reps()]
    return _emit(reports, config.fmt)


def cmd_xi(config: RunConfig, w_text: str | None, matrix_text: str | None) -> str:
    zd = config.datum()
    if (w_text is None) == (matrix_text is None):
        raise ZipDatumError("give exactly one of an element or --matrix")
    if w_text is not None:
        w = _parse_element(zd, w_text)
        out = xi_of_weyl(zd, w)
        payload = {"input": _label(w), "xi": _label(out), "small": is_small(zd, w)}
        return _emit(payload, config.fmt)
    F = Fq(*_factor(config.q))
    entries = [int(x) % F.p for x in matrix_text.replace(",", " ").split()]
    n = zd.rs.ambient_dim
    if len(entries) != n * n:
        raise ZipDatumError(f"need {n * n} row-major entries for a {n}x{n} matrix")
    if F.k != 1:
        raise ZipDatumError("matrix entries are reduced mod p; use a prime q")
    f = tuple(tuple(entries[i * n + j] for j in range(n)) for i in range(n))
    mat_inv(F, f)  # raises on singular input
    out = xi_classify(zd, F, f, config.m)
    return _emit({"matrix": entries, "m": config.m, "xi": _label(out)}, config.fmt)


def _factor(q: int) -> tuple[int, int]:
    from .glnzip import _factor_prime_power

    return _factor_prime_power(q)


def cmd_census(config: RunConfig, m_list: list[int]) -> str:
    if config.gl is None:
        raise ZipDatumError("census needs --gl N R")
    n, r = config.gl
    s = n - r
    sig = Signature(max(r, s), min(r, s))
    if sig.r != r:
        raise ZipDatumError("census expects r >= s; swap the signature")
    report = fp_point_census(sig, config.q, m_list, budget=config.budget)
    if config.fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["m", "stratum", "count"])
        for m, counts in report["counts"].items():
            for label, count in counts.items():
                writer.writerow([m, label, count])
        return buf.getvalue()
    return _emit(report, config.fmt)


def cmd_closed_form(config: RunConfig, r: int, s: int) -> str:
    return _emit(length2_closed_form(Signature(r, s)), config.fmt)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zipstrata",
        description="decide regularity in codimension one of zip strata "
        "from root-datum combinatorics",
    )
    parser.add_argument("--gl", nargs=2, type=int, metavar=("N", "R"))
    parser.add_argument("--cartan", metavar="FILE")
    parser.add_argument("--I", type=str, default=None,
                        help="comma-separated simple indices (generic data)")
    parser.add_argument("--sigma", default="id", help="'id', 'flip', or a permutation '2,1'")
    parser.add_argument("--m", type=int, default=1, help="Frobenius exponent")
    parser.add_argument("--q", type=int, default=2, help="field size for matrix input / census")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--format", dest="fmt", choices=["json", "dot", "csv"], default="json")
    parser.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("strata-list")
    p = sub.add_parser("decide")
    p.add_argument("w")
    p.add_argument("w_prime")
    p = sub.add_parser("closure")
    p.add_argument("w")
    p = sub.add_parser("sweep-length2")
    p.add_argument("--n-max", type=int, default=12)
    p.add_argument("--verify", action="store_true",
                   help="cross-check the closed form against decide_smooth")
    p = sub.add_parser("hasse")
    p.add_argument("w", nargs="?")
    p.add_argument("--weight", default=None, help="lattice vector '0,0,1,1'; omit to search")
    p = sub.add_parser("xi")
    p.add_argument("w", nargs="?")
    p.add_argument("--matrix", default=None, help="row-major entries, reduced mod p")
    p = sub.add_parser("census")
    p.add_argument("--m-list", default="1", help="comma-separated exponents")
    p = sub.add_parser("closed-form")
    p.add_argument("r", type=int)
    p.add_argument("s", type=int)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = RunConfig(
        gl=tuple(args.gl) if args.gl else None,
        cartan_file=args.cartan,
        sigma=args.sigma,
        I=[int(x) for x in args.I.split(",")] if args.I else None,
        m=args.m,
        q=args.q,
        seed=args.seed,
        fmt=args.fmt,
        budget=args.budget,
    )
    try:
        if args.command == "strata-list":
            out = cmd_strata_list(config)
        elif args.command == "decide":
            out = cmd_decide(config, args.w, args.w_prime)
        elif args.command == "closure":
            out = cmd_closure(config, args.w)
        elif args.command == "sweep-length2":
            out = cmd_sweep_length2(config, args.n_max, args.verify)
        elif args.command == "hasse":
            out = cmd_hasse(config, args.w, args.weight)
        elif args.command == "xi":
            out = cmd_xi(config, args.w, args.matrix)
        elif args.command == "census":
            m_list = [int(x) for x in args.m_list.split(",")]
            out = cmd_census(config, m_list)
        elif args.command == "closed-form":
            out = cmd_closed_form(config, args.r, args.s)
        else:  # pragma: no cover
            parser.error(f"unknown command {args.command}")
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ZipDatumError, RootDataError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    print(out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
