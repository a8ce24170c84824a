"""Command-line front end.

Exit status: 0 affirmative, 1 negative verdict (identity fails, not
isomorphic, asserted atlas check failed), 2 errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Mapping, Sequence

from . import lbz
from ._version import __version__
from .algcore import StructureTable, Subspace, check_identity, opposite_algebra
from .atlas import DEFAULT_MAX_GL_ORDER, DEFAULT_SEED, algebra_isomorphic, atlas_document, atlas_text, run_atlas
from .errors import BadParams, CapExceeded, LeibnizError
from .exactfield import FieldSpec
from .families import FAMILIES, build_family
from .invariants import DEFAULT_RATIONAL_HEIGHT, profile_document, structure_profile
from .lattice import (
    DEFAULT_MAX_DIM,
    DEFAULT_MAX_NODES,
    DEFAULT_MAX_P,
    lattice_fingerprint,
    lattice_isomorphism,
    lattice_isomorphisms,
    subalgebra_lattice,
    to_document,
    to_dot,
)

ISO_COUNT_LIMIT = 10_000

_ENV = {
    "convention": "LEIBNIZ_CONVENTION",
    "max_dim": "LEIBNIZ_MAX_DIM",
    "max_p": "LEIBNIZ_MAX_P",
    "max_lattice_nodes": "LEIBNIZ_MAX_NODES",
    "max_gl_order": "LEIBNIZ_MAX_GL_ORDER",
    "rational_height": "LEIBNIZ_HEIGHT",
    "seed": "LEIBNIZ_SEED",
}


@dataclass(frozen=True)
class RunConfig:
    convention: str = "right"
    max_dim: int = DEFAULT_MAX_DIM
    max_p: int = DEFAULT_MAX_P
    max_lattice_nodes: int = DEFAULT_MAX_NODES
    max_gl_order: int = DEFAULT_MAX_GL_ORDER
    rational_height: int = DEFAULT_RATIONAL_HEIGHT
    seed: int = DEFAULT_SEED
    out: str | None = None
    format: str = "text"

    @classmethod
    def from_args(cls, args: argparse.Namespace, environ: Mapping[str, str] | None = None) -> RunConfig:
        """Flags win over environment variables, which win over the defaults."""
        environ = os.environ if environ is None else environ
        values = {}
        for name, var in _ENV.items():
            flag = getattr(args, name, None)
            if flag is not None:
                values[name] = flag
            elif var in environ:
                raw = environ[var]
                if name == "convention":
                    values[name] = raw
                else:
                    try:
                        values[name] = int(raw)
                    except ValueError:
                        raise BadParams(f"{var} must be an integer, got {raw!r}") from None
        if values.get("convention", "right") not in ("right", "left"):
            raise BadParams("convention must be 'right' or 'left'")
        fmt = getattr(args, "format", None) or "text"
        return cls(out=getattr(args, "out", None), format="json" if fmt == "structured" else fmt, **values)

    def caps(self) -> dict:
        return {
            "max_dim": self.max_dim,
            "max_p": self.max_p,
            "max_lattice_nodes": self.max_lattice_nodes,
            "max_gl_order": self.max_gl_order,
            "rational_height": self.rational_height,
        }

    def check_caps(self, L: StructureTable) -> None:
        if L.dim > self.max_dim:
            raise CapExceeded(f"dimension {L.dim} exceeds --max-dim {self.max_dim}")
        if L.field.is_prime_field and L.field.modulus > self.max_p:
            raise CapExceeded(f"p = {L.field.modulus} exceeds --max-p {self.max_p}")


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _space(L: StructureTable, U: Subspace | None) -> str:
    if U is None:
        return "n/a (needs a prime field)"
    if not U.dim:
        return "0"
    return "span{" + ", ".join(L.format_vector(v) for v in U.basis) + "}"


# ---------------------------------------------------------------------------
# commands


def cmd_check(args, cfg: RunConfig) -> int:
    L = lbz.load(args.file)
    variant = args.variant or L.convention
    rep = check_identity(L, variant)
    if cfg.format == "json":
        doc = {"convention": L.convention, "variant": variant, "holds": rep.holds,
               "witness": [L.basis_labels[i] for i in rep.witness] if rep.witness else None,
               "defect": L.format_vector(rep.defect) if rep.defect is not None else None}
        _emit(cfg, _json(doc))
    else:
        lines = [f"convention: {L.convention}", f"identity ({variant}): {'holds' if rep.holds else 'fails'}"]
        if not rep.holds:
            x, y, z = (L.basis_labels[i] for i in rep.witness)
            lines.append(f"witness: x={x}, y={y}, z={z}; defect = {L.format_vector(rep.defect)}")
        _emit(cfg, "\n".join(lines) + "\n")
    return 0 if rep.holds else 1


def cmd_inv(args, cfg: RunConfig) -> int:
    L = lbz.load(args.file)
    cfg.check_caps(L)
    prof = structure_profile(L, cfg.rational_height)
    if cfg.format == "json":
        _emit(cfg, _json(profile_document(L, prof)))
        return 0
    everything = args.all or not (args.kernel or args.series or args.radical or args.centre)
    lines = [f"convention: {L.convention}", f"field: {L.field}", f"dim: {L.dim}"]
    if args.kernel or everything:
        lines.append(f"I = {_space(L, prof.kernel)}")
    if args.centre or everything:
        lines.append(f"Z = {_space(L, prof.centre)}")
    if args.series or everything:
        for name, res, word in (("lower central", prof.lower_central, "class"),
                                ("derived", prof.derived, "length")):
            tail = f"{word} {res.class_or_length}" if res.reaches_zero else "stabilizes above 0"
            lines.append(f"{name}: " + " > ".join(str(U.dim) for U in res.terms) + f" ({tail})")
    if args.radical or everything:
        lines.append(f"R = {_space(L, prof.radical)}")
        lines.append(f"N = {_space(L, prof.nilradical)}")
    if everything:
        lines.append(f"phi = {_space(L, prof.frattini)}")
        flags = profile_document(L, prof)["flags"]
        for k, v in flags.items():
            lines.append(f"{k}: {'n/a' if v is None else v}")
        if prof.is_cyclic.generator is not None:
            lines.append(f"generator: {L.format_vector(prof.is_cyclic.generator)}")
    _emit(cfg, "\n".join(lines) + "\n")
    return 0


def _lattice_for(L: StructureTable, cfg: RunConfig):
    cfg.check_caps(L)
    lat = subalgebra_lattice(L, cfg.max_dim, cfg.max_p)
    if lat.size > cfg.max_lattice_nodes:
        raise CapExceeded(f"{lat.size} lattice nodes exceed --max-nodes {cfg.max_lattice_nodes}")
    return lat


def cmd_lattice(args, cfg: RunConfig) -> int:
    L = lbz.load(args.file)
    lat = _lattice_for(L, cfg)
    fmt = "dot" if args.dot else "json" if args.json else cfg.format
    if fmt == "dot":
        _emit(cfg, f"// convention: {L.convention}\n" + to_dot(lat))
    elif fmt == "json":
        _emit(cfg, _json({"convention": L.convention, **to_document(lat)}))
    else:
        fp = lattice_fingerprint(lat)
        lines = [f"convention: {L.convention}", f"field: {L.field}", f"nodes: {fp.nodes}",
                 f"levels: {list(fp.levels)}", f"atoms: {fp.atoms}  coatoms: {fp.coatoms}",
                 f"modular: {fp.modular}  distributive: {fp.distributive}"]
        for i, U in enumerate(lat.nodes):
            tag = " ideal" if lat.node_meta[i][1] else ""
            lines.append(f"  {i}: dim {U.dim} {_space(L, U)}{tag}")
        for a, b in lat.covers:
            lines.append(f"  {a} < {b}")
        _emit(cfg, "\n".join(lines) + "\n")
    return 0


def cmd_iso(args, cfg: RunConfig) -> int:
    L1, L2 = lbz.load(args.file1), lbz.load(args.file2)
    if args.algebra:
        if L1.convention != L2.convention:
            L2 = opposite_algebra(L2)
        cfg.check_caps(L1)
        g = algebra_isomorphic(L1, L2, cfg.max_gl_order)
        doc = {"convention": L1.convention, "mode": "algebra", "isomorphic": g is not None,
               "matrix": [[L1.field.format(x) for x in r] for r in g] if g else None}
        if cfg.format == "json":
            _emit(cfg, _json(doc))
        else:
            lines = [f"convention: {L1.convention}", f"algebra isomorphic: {'yes' if g else 'no'}"]
            if g:
                lines.append("matrix (row i = image of basis vector i):")
                lines += ["  " + " ".join(L1.field.format(x) for x in r) for r in g]
            _emit(cfg, "\n".join(lines) + "\n")
        return 0 if g else 1
    lat1, lat2 = _lattice_for(L1, cfg), _lattice_for(L2, cfg)
    theta = lattice_isomorphism(lat1, lat2)
    count = 0
    if theta is not None:
        for _ in lattice_isomorphisms(lat1, lat2, ISO_COUNT_LIMIT):
            count += 1
    count_text = f"{count}" if count < ISO_COUNT_LIMIT else f">= {ISO_COUNT_LIMIT}"
    if cfg.format == "json":
        _emit(cfg, _json({"convention": L1.convention, "mode": "lattice", "isomorphic": theta is not None,
                          "isomorphisms": count_text, "map": list(theta.map) if theta else None}))
    else:
        lines = [f"convention: {L1.convention}", f"lattice isomorphic: {'yes' if theta else 'no'}"]
        if theta:
            lines.append(f"isomorphisms: {count_text}")
            lines.append("map: " + " ".join(f"{i}->{j}" for i, j in enumerate(theta.map)))
        _emit(cfg, "\n".join(lines) + "\n")
    return 0 if theta else 1


def _ints(text: str | None, fld: FieldSpec | None = None) -> list:
    if not text:
        return []
    parts = [t.strip() for t in text.split(",")]
    if fld is None:
        try:
            return [int(t) for t in parts]
        except ValueError:
            raise BadParams(f"expected comma-separated integers, got {text!r}") from None
    return [fld.parse_scalar(t) for t in parts]


def cmd_family(args, cfg: RunConfig) -> int:
    fld = FieldSpec.parse(args.field or "Q")
    L = build_family(args.name, fld, args.n, _ints(args.alphas, fld), _ints(args.rs))
    if cfg.convention == "left":
        L = opposite_algebra(L)
    _emit(cfg, lbz.dumps(L))
    return 0


def cmd_atlas(args, cfg: RunConfig) -> int:
    dims = _ints(args.dims) or [1, 2, 3]
    if args.field:
        fld = FieldSpec.parse(args.field)
        if not fld.is_prime_field:
            raise BadParams("the atlas needs prime fields")
        primes = [fld.modulus]
    else:
        primes = _ints(args.primes) or [2, 3]
    if max(dims) > cfg.max_dim or max(primes) > cfg.max_p:
        raise CapExceeded("atlas dims or primes exceed --max-dim/--max-p")
    run = run_atlas(dims, primes, cfg.convention, cfg.seed, args.samples, jobs=args.jobs, caps=cfg.caps())
    _emit(cfg, _json(atlas_document(run)) if cfg.format == "json" else atlas_text(run))
    return 0 if run.ok else 1


# ---------------------------------------------------------------------------
# parser


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--field", help="Q or GF(p) (family, atlas)")
    p.add_argument("--convention", choices=("right", "left"), default=None)
    p.add_argument("--max-dim", dest="max_dim", type=int)
    p.add_argument("--max-p", dest="max_p", type=int)
    p.add_argument("--max-nodes", dest="max_lattice_nodes", type=int)
    p.add_argument("--max-gl-order", dest="max_gl_order", type=int)
    p.add_argument("--height", dest="rational_height", type=int, help="rational search height")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="write output to this file")
    p.add_argument("--format", choices=("text", "json", "structured", "dot"))
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="leibniz", description="Exact workbench for small Leibniz algebras.")
    parser.add_argument("--version", action="version", version=f"leibniz {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="check the Leibniz identity")
    p.add_argument("file")
    p.add_argument("--variant", choices=("right", "left", "symmetric"))
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("inv", parents=[common], help="structural invariants")
    p.add_argument("file")
    for flag in ("kernel", "series", "radical", "centre", "all"):
        p.add_argument(f"--{flag}", action="store_true")
    p.set_defaults(func=cmd_inv)

    p = sub.add_parser("lattice", parents=[common], help="subalgebra lattice")
    p.add_argument("file")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--dot", action="store_true")
    g.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("iso", parents=[common], help="algebra or lattice isomorphism")
    p.add_argument("file1")
    p.add_argument("file2")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--algebra", action="store_true")
    g.add_argument("--lattice", action="store_true")
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("family", parents=[common], help="emit a named family member as LBZ")
    p.add_argument("name", choices=FAMILIES)
    p.add_argument("--n", type=int)
    p.add_argument("--alphas", help="comma-separated alpha_2..alpha_n (cyclic)")
    p.add_argument("--rs", help="comma-separated multiplicities (almost_nilpotent)")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("atlas", parents=[common], help="enumerate small algebras and run the theorem suite")
    p.add_argument("--dims", help="comma-separated dimensions (default 1,2,3)")
    p.add_argument("--primes", help="comma-separated primes (default 2,3)")
    p.add_argument("--samples", type=int, default=0, help="extra seeded dim-3/4 samples for per-algebra checks")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_atlas)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig.from_args(args)
        return args.func(args, cfg)
    except LeibnizError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
