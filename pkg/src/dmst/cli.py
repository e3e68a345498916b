"""Command-line interface: ``dmst <command> [options]``.

Exit status is 0 on success, 1 when a verification fails and 2 for an
invalid configuration.
"""
from __future__ import annotations

import argparse
import itertools
import json
import random
import sys
from dataclasses import dataclass

from .algebra import SuperAlgebra, substitute
from .errors import DMSTError
from .gf import Field, enumerate_field, field_create, prime_power
from .groups import Composition, SubgroupSpec, act, enumerate_subgroup, generators, normalize_twist
from .invariants import FAMILY_LABELS, basis_family, dickson_L, dickson_Q, dickson_V, dickson_V_from_Q, mui_M
from .oracle import hilbert_table, steinberg_table, verify_free_basis
from .oracle.fixed import fixed_space
from .series import (
    compositions,
    crabb,
    expand,
    identity_lhs,
    km_he,
    km_theorem,
    curtis_sum,
    module_series,
    rational_equal,
    steinberg_closed,
    theorem_b,
    theorem_c1,
    twisted_parabolic,
)

CHECKS = ("basis", "dickson", "lemma45", "cor1", "vm", "crabb", "groups")


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    field: Field
    n: int
    composition: Composition
    k: int
    T: int
    fmt: str
    torus: bool
    seed: int

    @property
    def q(self) -> int:
        return self.field.q


def _build_field(q: int, modulus: str | None) -> Field:
    p, r = prime_power(q)
    coeffs = tuple(int(c) for c in modulus.split(",")) if modulus else None
    return field_create(p, r, coeffs)


def make_config(args) -> RunConfig:
    field = _build_field(args.q, getattr(args, "modulus", None))
    n = getattr(args, "n", 1)
    comp_text = getattr(args, "composition", None)
    composition = Composition.parse(comp_text) if comp_text else Composition((n,))
    if composition.n != n:
        raise ConfigError(f"composition {composition} does not sum to n = {n}")
    if n < 1:
        raise ConfigError("n must be >= 1")
    k = normalize_twist(getattr(args, "twist", 0), field)
    return RunConfig(
        field=field,
        n=n,
        composition=composition,
        k=k,
        T=getattr(args, "tmax", 10),
        fmt=getattr(args, "format", "text"),
        torus=not getattr(args, "no_torus", False),
        seed=getattr(args, "seed", 0),
    )


def _spec(cfg: RunConfig, group: str) -> SubgroupSpec:
    if group == "GL":
        return SubgroupSpec.GL(cfg.field, cfg.n)
    if group == "SL":
        return SubgroupSpec.SL(cfg.field, cfg.n)
    if group == "U":
        return SubgroupSpec.U(cfg.field, cfg.n)
    if group == "K":
        return SubgroupSpec.K(cfg.field, cfg.composition)
    return SubgroupSpec.P(cfg.field, cfg.composition)


def _emit(out, text: str) -> None:
    out.write(text if text.endswith("\n") else text + "\n")


# -- commands -----------------------------------------------------------------------

def cmd_field(cfg: RunConfig, args, out, err) -> int:
    F = cfg.field
    info = {"q": F.q, "p": F.p, "r": F.r, "modulus": list(F.modulus), "field": F.describe()}
    if F.q <= 1 << 16:
        elements, zeta = enumerate_field(F)
        info["generator"] = str(zeta)
        if F.q <= 64:
            info["elements"] = [str(e) for e in elements]
    if cfg.fmt == "json":
        _emit(out, json.dumps(info))
    else:
        for key, value in info.items():
            _emit(out, f"{key}: {', '.join(value) if isinstance(value, list) and key == 'elements' else value}")
    return 0


def cmd_invariants(cfg: RunConfig, args, out, err) -> int:
    A = SuperAlgebra(cfg.field, cfg.n)
    family = basis_family(A, args.family, cfg.composition, cfg.k if args.family == "PI" else 0)
    if cfg.fmt == "json":
        _emit(out, family.to_json())
        return 0
    title = args.family
    if args.family in ("KI", "PI"):
        title += str(cfg.composition)
    if args.family == "PI":
        title += f", k = {cfg.k}"
    _emit(out, f"{title} over {cfg.field.describe()}, n = {cfg.n}")
    _emit(out, "base degrees: " + ", ".join(map(str, family.base_degrees)))
    for el, (a, b), name in family.generators:
        _emit(out, f"({a},{b}) {name} = {el}")
    return 0


def _closed_hilbert(cfg: RunConfig, group: str):
    if group in ("P", "GL"):
        comp = cfg.composition if group == "P" else Composition((cfg.n,))
        return twisted_parabolic(cfg.q, comp, cfg.k)
    A = SuperAlgebra(cfg.field, cfg.n)
    label = {"SL": "MuiSL", "U": "MuiU", "K": "KI"}[group]
    return module_series(basis_family(A, label, cfg.composition))


def _compare(cfg: RunConfig, closed, table, out, err) -> int:
    expanded = expand(closed, cfg.T)
    diffs = expanded.differences(table)
    if cfg.fmt == "json":
        _emit(out, json.dumps({"closed": closed.to_dict(), "oracle": table.to_dict(), "agree": not diffs}))
    elif cfg.fmt == "csv":
        _emit(out, "tDeg,sDeg,closed,oracle")
        for t, s, dim in table.rows():
            _emit(out, f"{t},{s},{expanded[(t, s)]},{dim}")
    else:
        _emit(out, f"closed form: {closed}")
        _emit(out, table.to_csv())
        _emit(out, "agree" if not diffs else f"disagree at {len(diffs)} cells")
    for (t, s), a, b in diffs:
        _emit(err, f"mismatch at ({t},{s}): closed {a}, oracle {b}")
    return 1 if diffs else 0


def _print_series(cfg: RunConfig, series, out) -> None:
    if cfg.fmt == "json":
        _emit(out, json.dumps({"closed": series.to_dict(), "table": expand(series, cfg.T).to_dict()}))
    elif cfg.fmt == "csv":
        _emit(out, expand(series, cfg.T).to_csv(cfg.n))
    else:
        _emit(out, f"closed form: {series}")
        _emit(out, expand(series, cfg.T).to_csv(cfg.n))


def _print_table(cfg: RunConfig, table, out) -> None:
    _emit(out, table.to_json() if cfg.fmt == "json" else table.to_csv())


def cmd_hilbert(cfg: RunConfig, args, out, err) -> int:
    spec = _spec(cfg, args.group)
    if args.method == "closed":
        _print_series(cfg, _closed_hilbert(cfg, args.group), out)
        return 0
    table = hilbert_table(spec, cfg.k, cfg.T, torus=cfg.torus)
    if args.method == "oracle":
        _print_table(cfg, table, out)
        return 0
    return _compare(cfg, _closed_hilbert(cfg, args.group), table, out, err)


def cmd_steinberg(cfg: RunConfig, args, out, err) -> int:
    closed = steinberg_closed(cfg.q, cfg.n, cfg.k)
    if args.method == "closed":
        _print_series(cfg, closed, out)
        return 0
    table = steinberg_table(cfg.n, cfg.field, cfg.k, cfg.T, torus=cfg.torus)
    if args.method == "curtis-oracle":
        _print_table(cfg, table, out)
        return 0
    return _compare(cfg, closed, table, out, err)


def cmd_identity(cfg: RunConfig, args, out, err) -> int:
    q, n = cfg.q, cfg.n
    ident = rational_equal(identity_lhs(q, n), theorem_c1(q, n))
    km = rational_equal(curtis_sum(n, lambda I: km_he(q, I)), km_theorem(q, n))
    if cfg.fmt == "json":
        _emit(out, json.dumps({"identity": str(ident), "KMthm": str(km), "passed": bool(ident and km)}))
    else:
        _emit(out, f"identity certificate: {ident}")
        _emit(out, f"KMthm certificate: {km}")
    if not (ident and km):
        _emit(err, "identity check failed")
        return 1
    return 0


# -- verify -------------------------------------------------------------------------

def _check_basis(cfg: RunConfig) -> tuple[bool, str]:
    A = SuperAlgebra(cfg.field, cfg.n)
    report = verify_free_basis(
        basis_family(A, "PI", cfg.composition, cfg.k), SubgroupSpec.P(cfg.field, cfg.composition), cfg.k, cfg.T, torus=cfg.torus
    )
    return report.passed, report.to_json()


def _check_dickson(cfg: RunConfig) -> tuple[bool, str]:
    A = SuperAlgebra(cfg.field, cfg.n)
    bad = [
        f"Q_{{{m},{k}}}"
        for m in range(1, cfg.n + 1)
        for k in range(m + 1)
        if dickson_Q(A, m, k, "quotient") != dickson_Q(A, m, k, "recursion")
    ]
    bad += [f"L_{m}" for m in range(1, cfg.n + 1) if dickson_L(A, m, "product") != dickson_L(A, m, "determinant")]
    return not bad, "ok" if not bad else "disagree: " + ", ".join(bad)


def _check_vm(cfg: RunConfig) -> tuple[bool, str]:
    A = SuperAlgebra(cfg.field, cfg.n)
    bad = [f"V_{m}" for m in range(1, cfg.n + 1) if dickson_V(A, m) != dickson_V_from_Q(A, m)]
    return not bad, "ok" if not bad else "disagree: " + ", ".join(bad)


def _check_lemma45(cfg: RunConfig) -> tuple[bool, str]:
    A = SuperAlgebra(cfg.field, cfg.n)
    bad = []
    for m in range(1, cfg.n + 1):
        L = dickson_L(A, m)
        for j in range(1, m + 1):
            for b in itertools.combinations(range(m), j):
                lhs = A.one()
                for bi in b:
                    lhs = lhs * mui_M(A, m, (bi,))
                rhs = mui_M(A, m, b) * L ** (j - 1)
                if (j * (j - 1) // 2) % 2:
                    rhs = -rhs
                if lhs != rhs:
                    bad.append(f"M_{{{m};{','.join(map(str, b))}}}")
    return not bad, "ok" if not bad else "fails for " + ", ".join(bad)


def _check_cor1(cfg: RunConfig) -> tuple[bool, str]:
    A = SuperAlgebra(cfg.field, cfg.n)
    bad = []
    for m in range(1, cfg.n + 1):
        images = [A.x(a) if a != m else A.zero() for a in range(1, cfg.n + 1)]
        for j in range(1, m + 1):
            for head in itertools.combinations(range(m - 1), j - 1):
                b = head + (m - 1,)
                lhs = substitute(mui_M(A, m, b), images, A.ys())
                rhs = mui_M(A, m - 1, head) * A.y(m)
                if (m + j) % 2:
                    rhs = -rhs
                if lhs != rhs:
                    bad.append(f"M_{{{m};{','.join(map(str, b))}}}")
    return not bad, "ok" if not bad else "fails for " + ", ".join(bad)


def _check_crabb(cfg: RunConfig) -> tuple[bool, str]:
    if cfg.q == 2:
        return True, "vacuous for q = 2"
    bad = [
        str(I)
        for I in compositions(cfg.n)
        if not rational_equal(crabb(cfg.q, I), theorem_b(cfg.q, I, cfg.q - 2).dualize_exterior(cfg.n))
    ]
    return not bad, "ok" if not bad else "fails for " + ", ".join(bad)


def _check_groups(cfg: RunConfig) -> tuple[bool, str]:
    """Random elements: fixed by the generators iff fixed by every group element."""
    spec = SubgroupSpec.P(cfg.field, cfg.composition)
    if spec.order() > 10_000:
        return True, f"skipped: |{spec}| = {spec.order()} > 10000"
    rng = random.Random(cfg.seed)
    elements = enumerate_subgroup(spec)
    gens = generators(spec)
    A = SuperAlgebra(cfg.field, cfg.n)
    bad = 0
    for trial in range(20):
        bidegree = (rng.randrange(0, 6), rng.randrange(0, cfg.n + 1))
        monos, W = fixed_space(spec, cfg.k, bidegree)
        terms = {}
        for c in range(W.shape[1]):
            coef = rng.randrange(cfg.q)
            for pos in W[:, c].nonzero()[0]:
                m = monos[pos]
                key = (m.x, sum(1 << (i - 1) for i in m.y))
                terms[key] = cfg.field.add(terms.get(key, 0), cfg.field.mul(coef, int(W[pos, c])))
        if trial % 2 and monos:
            m = rng.choice(monos)
            key = (m.x, sum(1 << (i - 1) for i in m.y))
            terms[key] = cfg.field.add(terms.get(key, 0), 1)
        f = A.element({key: c for key, c in terms.items() if c})
        by_gens = all(act(g, f, cfg.k) == f for g in gens)
        by_all = all(act(g, f, cfg.k) == f for g in elements)
        bad += by_gens != by_all
    return not bad, "ok" if not bad else f"{bad} disagreements"


_CHECK_FUNCS = {
    "basis": _check_basis,
    "dickson": _check_dickson,
    "lemma45": _check_lemma45,
    "cor1": _check_cor1,
    "vm": _check_vm,
    "crabb": _check_crabb,
    "groups": _check_groups,
}


def cmd_verify(cfg: RunConfig, args, out, err) -> int:
    names = CHECKS if args.check == "all" else (args.check,)
    results = {}
    for name in names:
        results[name] = _CHECK_FUNCS[name](cfg)
    if cfg.fmt == "json":
        _emit(out, json.dumps({name: {"passed": ok, "detail": detail} for name, (ok, detail) in results.items()}))
    else:
        for name, (ok, detail) in results.items():
            _emit(out, f"{name}: {'PASS' if ok else 'FAIL'} {detail}")
    failed = [name for name, (ok, _) in results.items() if not ok]
    for name in failed:
        _emit(err, f"verification failed: {name}")
    return 1 if failed else 0


# -- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dmst", description="Twisted Dickson-Mui invariants and their Hilbert series.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, required=True, help="field size (a prime power)")
    common.add_argument("--modulus", help="comma-separated coefficients of the defining polynomial, constant term first")
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--seed", type=int, default=0)
    shaped = argparse.ArgumentParser(add_help=False)
    shaped.add_argument("--n", type=int, default=1)
    shaped.add_argument("--composition", help="block sizes such as 2,1 (default: n)")
    shaped.add_argument("--twist", type=int, default=0, help="power k of the determinant twist")
    shaped.add_argument("--tmax", type=int, default=10, help="truncation degree T")
    shaped.add_argument("--no-torus", action="store_true", help="disable the torus-weight restriction in the oracle")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("field", parents=[common], help="describe the field")
    p = sub.add_parser("invariants", parents=[common, shaped], help="print a basis family")
    p.add_argument("--family", choices=FAMILY_LABELS, default="PI")
    p = sub.add_parser("hilbert", parents=[common, shaped], help="Hilbert series of twisted invariants")
    p.add_argument("--method", choices=("closed", "oracle", "both"), default="closed")
    p.add_argument("--group", choices=("P", "GL", "SL", "U", "K"), default="P")
    p = sub.add_parser("steinberg", parents=[common, shaped], help="Steinberg multiplicity series")
    p.add_argument("--method", choices=("closed", "curtis-oracle", "both"), default="closed")
    p = sub.add_parser("verify", parents=[common, shaped], help="run verification checks")
    p.add_argument("--check", choices=CHECKS + ("all",), default="all")
    sub.add_parser("identity", parents=[common, shaped], help="certify the Steinberg series identities")
    return parser


_COMMANDS = {
    "field": cmd_field,
    "invariants": cmd_invariants,
    "hilbert": cmd_hilbert,
    "steinberg": cmd_steinberg,
    "verify": cmd_verify,
    "identity": cmd_identity,
}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = make_config(args)
        return _COMMANDS[args.command](cfg, args, out, err)
    except (ConfigError, DMSTError, ValueError) as exc:
        _emit(err, f"error: {exc}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
