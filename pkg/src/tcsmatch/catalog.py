"""Block catalogs and certificate serialization.

Catalog files are UTF-8, line oriented, one ``[entry]`` section per block::

    # comment
    [entry]
    name = "MM2-13"
    labels = ["H", "E"]
    gram = [[6, 6], [6, 2]]
    ample = [[1, 1]]
    provenance = "free text about the ample classes"
    assume = "RDP K3 fibration"
    assume = "very general fibre has Picard lattice N"

Values are JSON literals.  ``assume`` may repeat; every other key appears at
most once per entry.  ``anticanonical`` (an integer vector) and
``description`` are optional.

Certificates serialize to canonical JSON (sorted keys, two-space indent,
trailing newline).  Integers beyond 53 bits are written as decimal strings
and rationals as ``"num/den"``, so the output is safe for any JSON reader.
"""

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .bundle import BundleCertificate, BundleData, StabilityReport
from .errors import ParseError, ValidationError
from .lattice import IntegralLattice
from .matching import BlockLatticeData, EmbeddabilityVerdict, MatchingCertificate, PushoutResult

SCHEMA_VERSION = 1

_KEYS = {"name", "labels", "gram", "ample", "provenance", "assume", "anticanonical", "description"}


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    gram: tuple
    basis_labels: tuple = ()
    declared_ample: tuple = ()
    provenance: str = ""
    assumptions: tuple = ()
    anticanonical: Optional[tuple] = None
    description: str = ""

    def to_block(self):
        return BlockLatticeData(
            name=self.name,
            picard=IntegralLattice(self.gram, self.name),
            basis_labels=self.basis_labels,
            declared_ample=self.declared_ample,
            anticanonical=self.anticanonical,
            assumptions=self.assumptions,
        )


@dataclass(frozen=True)
class Catalog:
    entries: tuple
    source_digest: str = ""

    def __getitem__(self, name):
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def names(self):
        return [e.name for e in self.entries]


def validate_entry(entry):
    """Raise ValidationError naming the failed invariant."""
    gram = entry.gram
    n = len(gram)
    if n != 2 or any(len(row) != 2 for row in gram):
        raise ValidationError("shape", f"gram must be 2x2, got {gram}", entry.name)
    if gram[0][1] != gram[1][0]:
        raise ValidationError("symmetry", f"gram {gram} is not symmetric", entry.name)
    # Remaining invariants (evenness, degeneracy, signature, ample squares)
    # are the block invariants.
    entry.to_block()


def _vec(value, key, line, col, depth):
    def ok(v, d):
        if d == 0:
            return isinstance(v, int) and not isinstance(v, bool)
        return isinstance(v, list) and all(ok(x, d - 1) for x in v)

    if not ok(value, depth):
        shape = "an integer vector" if depth == 1 else "a list of integer vectors"
        raise ParseError(f"{key} must be {shape}", line, col)
    if depth == 1:
        return tuple(value)
    return tuple(tuple(v) for v in value)


def _build_entry(fields, line):
    if "name" not in fields:
        raise ParseError("entry has no name", line)
    for key in ("gram",):
        if key not in fields:
            raise ParseError(f"entry {fields['name'][0]!r} has no {key}", line)
    get = lambda k, default: fields[k][0] if k in fields else default
    entry = CatalogEntry(
        name=get("name", None),
        gram=get("gram", ()),
        basis_labels=tuple(get("labels", ())),
        declared_ample=get("ample", ()),
        provenance=get("provenance", ""),
        assumptions=tuple(fields.get("assume", ())),
        anticanonical=get("anticanonical", None),
        description=get("description", ""),
    )
    validate_entry(entry)
    return entry


def parse_catalog(text):
    entries = []
    fields = None
    start = 0
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("["):
            if line != "[entry]":
                raise ParseError(f"unknown section {line!r}", lineno, 1)
            if fields is not None:
                entries.append(_build_entry(fields, start))
            fields, start = {}, lineno
            continue
        if fields is None:
            raise ParseError("key outside of an [entry] section", lineno, 1)
        key, sep, value = raw.partition("=")
        key = key.strip()
        if not sep:
            raise ParseError("expected 'key = value'", lineno, 1)
        if key not in _KEYS:
            raise ParseError(f"unknown key {key!r}", lineno, raw.index(key) + 1)
        col = len(raw) - len(value.lstrip()) + 1
        try:
            parsed = json.loads(value)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad value for {key}: {exc.msg}", lineno, col + exc.colno - 1) from None
        if key in ("name", "provenance", "assume", "description"):
            if not isinstance(parsed, str):
                raise ParseError(f"{key} must be a string", lineno, col)
        elif key == "labels":
            if not (isinstance(parsed, list) and all(isinstance(x, str) for x in parsed)):
                raise ParseError("labels must be a list of strings", lineno, col)
        elif key == "anticanonical":
            parsed = _vec(parsed, key, lineno, col, 1)
        else:
            parsed = _vec(parsed, key, lineno, col, 2)
        if key != "assume" and key in fields:
            raise ParseError(f"duplicate key {key!r}", lineno, 1)
        fields.setdefault(key, []).append(parsed)
    if fields is not None:
        entries.append(_build_entry(fields, start))
    names = [e.name for e in entries]
    dup = next((n for i, n in enumerate(names) if n in names[:i]), None)
    if dup is not None:
        raise ValidationError("unique-names", "duplicate entry name", dup)
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    return Catalog(tuple(entries), digest)


def format_catalog(catalog):
    """Catalog text that parses back to the same entries."""
    out = []
    for e in catalog.entries:
        out.append("[entry]")
        out.append(f"name = {json.dumps(e.name, ensure_ascii=False)}")
        if e.description:
            out.append(f"description = {json.dumps(e.description, ensure_ascii=False)}")
        if e.basis_labels:
            out.append(f"labels = {json.dumps(list(e.basis_labels), ensure_ascii=False)}")
        out.append(f"gram = {json.dumps([list(r) for r in e.gram])}")
        out.append(f"ample = {json.dumps([list(v) for v in e.declared_ample])}")
        if e.anticanonical is not None:
            out.append(f"anticanonical = {json.dumps(list(e.anticanonical))}")
        if e.provenance:
            out.append(f"provenance = {json.dumps(e.provenance, ensure_ascii=False)}")
        for a in e.assumptions:
            out.append(f"assume = {json.dumps(a, ensure_ascii=False)}")
        out.append("")
    return "\n".join(out)


_GEOMETRIC_ASSUMPTIONS = (
    "Fano-type building block: proper transform of an anticanonical pencil, Sigma ~ -K_Z",
    "very general fibre: Pic(f^-1(b)) = N for all but countably many b",
    "RDP K3 fibration: finitely many singular fibres, at worst rational double points",
    "family is (N, Amp)-generic with Amp containing the declared ample class",
)

BUILTIN_CATALOG_TEXT = "\n".join([
    "# Picard lattices of the two rank-2 Fano threefolds of the worked matching.",
    "# Basis (H, E): H pulled back from the base, E the exceptional divisor.",
    "",
    "[entry]",
    'name = "MM2-13"',
    'description = "blow-up of a smooth quadric Q in P^4 in a degree 6 genus 2 curve"',
    'labels = ["H", "E"]',
    "gram = [[6, 6], [6, 2]]",
    "ample = [[1, 1]]",
    'provenance = "A = H + E; ampleness of A is a geometric input, not checked"',
] + [f"assume = {json.dumps(a)}" for a in _GEOMETRIC_ASSUMPTIONS] + [
    "",
    "[entry]",
    'name = "MM2-14"',
    'description = "blow-up of V5 in an elliptic curve cut out by two hyperplane sections"',
    'labels = ["H", "E"]',
    "gram = [[10, 5], [5, 0]]",
    "ample = [[1, 2]]",
    'provenance = "A = H + 2E; ampleness of A is a geometric input, not checked"',
] + [f"assume = {json.dumps(a)}" for a in _GEOMETRIC_ASSUMPTIONS] + [""])


def builtin_paper_catalog():
    return parse_catalog(BUILTIN_CATALOG_TEXT)


# --- certificate serialization -----------------------------------------------

_MAX_SAFE = 2 ** 53


def _enc_int(n):
    return str(n) if abs(n) > _MAX_SAFE else n


def _dec_int(v):
    if v is None:
        return None
    if isinstance(v, str):
        return int(v)
    return v


def _enc_frac(x):
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _dec_frac(s):
    return Fraction(s)


def _enc_vec(v):
    return None if v is None else [_enc_int(x) for x in v]


def _dec_vec(v):
    return None if v is None else tuple(_dec_int(x) for x in v)


def _enc_mat(m):
    return [_enc_vec(r) for r in m]


def _dec_mat(m):
    return tuple(_dec_vec(r) for r in m)


def _enc_lattice(lat):
    d = {"gram": _enc_mat(lat.gram)}
    if lat.label is not None:
        d["label"] = lat.label
    return d


def _dec_lattice(d):
    return IntegralLattice(_dec_mat(d["gram"]), d.get("label"))


def _enc_block(b):
    return {
        "name": b.name,
        "picard": _enc_lattice(b.picard),
        "basis_labels": list(b.basis_labels),
        "declared_ample": _enc_mat(b.declared_ample),
        "anticanonical": _enc_vec(b.anticanonical),
        "assumptions": list(b.assumptions),
    }


def _dec_block(d):
    return BlockLatticeData(
        name=d["name"],
        picard=_dec_lattice(d["picard"]),
        basis_labels=tuple(d["basis_labels"]),
        declared_ample=_dec_mat(d["declared_ample"]),
        anticanonical=_dec_vec(d["anticanonical"]),
        assumptions=tuple(d["assumptions"]),
    )


def _enc_pushout(p):
    if p is None:
        return None
    return {
        "w": _enc_lattice(p.w),
        "det_w": _enc_int(p.w.det),
        "frame": _enc_lattice(p.frame),
        "glue_vectors": [[_enc_frac(x) for x in g] for g in p.glue_vectors],
        "w_basis": [[_enc_frac(x) for x in g] for g in p.w_basis],
        "embed_plus": _enc_mat(p.embed_plus),
        "embed_minus": _enc_mat(p.embed_minus),
        "r_basis": _enc_mat(p.r_basis),
        "index": _enc_int(p.index),
    }


def _dec_pushout(d):
    if d is None:
        return None
    return PushoutResult(
        w=_dec_lattice(d["w"]),
        frame=_dec_lattice(d["frame"]),
        glue_vectors=tuple(tuple(_dec_frac(x) for x in g) for g in d["glue_vectors"]),
        w_basis=tuple(tuple(_dec_frac(x) for x in g) for g in d["w_basis"]),
        embed_plus=_dec_mat(d["embed_plus"]),
        embed_minus=_dec_mat(d["embed_minus"]),
        r_basis=_dec_mat(d["r_basis"]),
        index=_dec_int(d["index"]),
    )


def _enc_checks(checks):
    return [[name, v] for name, v in checks]


def _dec_checks(lst):
    return tuple((name, v) for name, v in lst)


def _matching_envelope(c):
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "matching",
        "valid": c.valid,
        "reasons": list(c.reasons),
        "assumptions": list(c.assumptions),
        "data": {
            "block_plus": _enc_block(c.block_plus),
            "block_minus": _enc_block(c.block_minus),
            "ample_plus": _enc_vec(c.ample_plus),
            "ample_minus": _enc_vec(c.ample_minus),
            "ortho_gen_plus": _enc_vec(c.ortho_gen_plus),
            "ortho_gen_minus": _enc_vec(c.ortho_gen_minus),
            "pushout": _enc_pushout(c.pushout),
            "embeddability": None if c.embeddability is None else {
                "status": c.embeddability.status,
                "criterion": c.embeddability.criterion,
            },
            "checks": _enc_checks(c.checks),
            "perpendicularity_ambient": "W",
        },
    }


def _matching_from_envelope(env):
    d = env["data"]
    e = d["embeddability"]
    return MatchingCertificate(
        block_plus=_dec_block(d["block_plus"]),
        block_minus=_dec_block(d["block_minus"]),
        ample_plus=_dec_vec(d["ample_plus"]),
        ample_minus=_dec_vec(d["ample_minus"]),
        ortho_gen_plus=_dec_vec(d["ortho_gen_plus"]),
        ortho_gen_minus=_dec_vec(d["ortho_gen_minus"]),
        pushout=_dec_pushout(d["pushout"]),
        embeddability=None if e is None else EmbeddabilityVerdict(e["status"], e["criterion"]),
        checks=_dec_checks(d["checks"]),
        reasons=tuple(env["reasons"]),
        assumptions=tuple(env["assumptions"]),
    )


def _enc_stability(s):
    if s is None:
        return None
    return {
        "bound": _enc_int(s.bound),
        "max_square": _enc_int(s.max_square),
        "divisibility": _enc_int(s.divisibility),
        "divisibility_coprime": s.divisibility_coprime,
        "bogomolov_margin": _enc_frac(s.bogomolov_margin),
        "passed": s.passed,
    }


def _dec_stability(d):
    if d is None:
        return None
    return StabilityReport(
        bound=_dec_int(d["bound"]),
        max_square=_dec_int(d["max_square"]),
        divisibility=_dec_int(d["divisibility"]),
        divisibility_coprime=d["divisibility_coprime"],
        bogomolov_margin=_dec_frac(d["bogomolov_margin"]),
    )


def _bundle_envelope(c):
    b = c.bundle
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "bundle",
        "valid": c.valid,
        "reasons": list(c.reasons),
        "assumptions": list(c.matching.assumptions),
        "data": {
            "matching": _matching_envelope(c.matching),
            "rank": _enc_int(b.rank),
            "k": _enc_int(b.k),
            "c1": _enc_vec(b.c1),
            "c1_plus": _enc_vec(b.c1_plus),
            "c1_minus": _enc_vec(b.c1_minus),
            "c1_square": _enc_int(b.c1_square),
            "c2": None if b.c2 is None else _enc_int(b.c2),
            "delta": None if c.delta is None else _enc_int(c.delta),
            "gcd_check": c.gcd_check,
            "gcd_witness": None if c.gcd_witness is None else _enc_int(c.gcd_witness),
            "stability_plus": _enc_stability(c.stability_plus),
            "stability_minus": _enc_stability(c.stability_minus),
            "ample_rational": c.ample_rational,
            "degenerate": c.degenerate,
            "checks": _enc_checks(c.checks),
        },
    }


def _bundle_from_envelope(env):
    d = env["data"]
    return BundleCertificate(
        matching=_matching_from_envelope(d["matching"]),
        bundle=BundleData(
            rank=_dec_int(d["rank"]),
            k=_dec_int(d["k"]),
            c1=_dec_vec(d["c1"]),
            c1_plus=_dec_vec(d["c1_plus"]),
            c1_minus=_dec_vec(d["c1_minus"]),
            c1_square=_dec_int(d["c1_square"]),
            c2=_dec_int(d["c2"]),
        ),
        gcd_check=d["gcd_check"],
        gcd_witness=_dec_int(d["gcd_witness"]),
        stability_plus=_dec_stability(d["stability_plus"]),
        stability_minus=_dec_stability(d["stability_minus"]),
        ample_rational=d["ample_rational"],
        delta=_dec_int(d["delta"]),
        checks=_dec_checks(d["checks"]),
        reasons=tuple(env["reasons"]),
    )


def certificate_to_dict(c):
    if isinstance(c, BundleCertificate):
        return _bundle_envelope(c)
    if isinstance(c, MatchingCertificate):
        return _matching_envelope(c)
    raise TypeError(f"not a certificate: {type(c).__name__}")


def dumps_canonical(obj):
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def serialize_certificate(c):
    return dumps_canonical(certificate_to_dict(c))


def deserialize_certificate(text):
    env = json.loads(text)
    if env.get("schema_version") != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema_version {env.get('schema_version')!r}")
    kind = env.get("kind")
    if kind == "matching":
        return _matching_from_envelope(env)
    if kind == "bundle":
        return _bundle_from_envelope(env)
    raise ParseError(f"unknown certificate kind {kind!r}")
