"""File formats: presentations, double Ore data, and twisting systems.

All files are JSON.  Scalars are strings in the canonical textual form
``p/q + p/q*i + p/q*r2 + p/q*i*r2`` (zero terms omitted, integer
denominators dropped).  Words of degree 2 are keys of the form
"gen1 gen2" (space separated).  A double Ore file carries the base
presentation plus ``p12``, ``p11`` and the four generator-image tables
``sigma`` keyed "11", "12", "21", "22".
"""

from __future__ import annotations

import json

from .errors import ParseError
from .exactlin import Scalar, TensorElement
from .quadratic import QuadraticPresentation
from .deform import DoubleOreData


def parse_scalar(text):
    if not isinstance(text, str):
        if isinstance(text, int):
            return Scalar(text)
        raise ParseError(f"scalar must be a string, got {text!r}")
    return Scalar.parse(text)


def _parse_word(key, presentation_names):
    parts = key.split()
    index = {name: k for k, name in enumerate(presentation_names)}
    try:
        return tuple(index[p] for p in parts)
    except KeyError as exc:
        raise ParseError(f"unknown generator in word {key!r}") from exc


def parse_tensor(obj, names, degree=None):
    terms = {}
    for key, value in obj.items():
        word = _parse_word(key, names)
        if degree is not None and len(word) != degree:
            raise ParseError(f"word {key!r} must have degree {degree}")
        terms[word] = parse_scalar(value)
    return TensorElement(terms)


def parse_presentation(doc):
    try:
        names = list(doc["generators"])
    except (KeyError, TypeError) as exc:
        raise ParseError("missing generators") from exc
    if not names or not all(isinstance(n, str) for n in names):
        raise ParseError("generators must be a nonempty list of names")
    relations = [parse_tensor(rel, names, degree=2)
                 for rel in doc.get("relations", [])]
    try:
        presentation = QuadraticPresentation(names, relations)
    except Exception as exc:
        raise ParseError(f"bad presentation: {exc}") from exc
    central = None
    if "central" in doc and doc["central"] is not None:
        central = parse_tensor(doc["central"], names, degree=2)
    return presentation, central


def parse_double_ore(doc):
    presentation, central = parse_presentation(doc)
    try:
        p12 = parse_scalar(doc["p12"])
        p11 = parse_scalar(doc["p11"])
        sigma_doc = doc["sigma"]
    except KeyError as exc:
        raise ParseError(f"missing double Ore field: {exc}") from exc
    g = presentation.ngens
    tables = []
    for i in (1, 2):
        row = []
        for j in (1, 2):
            key = f"{i}{j}"
            if key not in sigma_doc:
                raise ParseError(f"missing sigma table {key}")
            mat = [[Scalar(0)] * g for _ in range(g)]
            for src, image in sigma_doc[key].items():
                if src not in presentation.generators:
                    raise ParseError(f"unknown generator {src!r} in sigma {key}")
                col = presentation.index_of(src)
                for dst, coeff in image.items():
                    if dst not in presentation.generators:
                        raise ParseError(f"unknown generator {dst!r} in sigma {key}")
                    mat[presentation.index_of(dst)][col] = parse_scalar(coeff)
            row.append(mat)
        tables.append(tuple(row))
    data = DoubleOreData(presentation, p12, p11, tuple(tables))
    return data, central


def parse_twist_file(doc):
    """A twisting-system file: the deformation defining E, the graded basis
    matrices, and the two theta tables over E's serialized basis labels."""
    from .deform import build_clifford
    from .twist import GradedBasisM2, TwistingSystemM2
    from .algebra import GradedLinMap, MatrixHom

    if "algebra" not in doc:
        raise ParseError("missing algebra block")
    presentation, central = parse_presentation(doc["algebra"])
    if central is None:
        raise ParseError("the algebra block needs a central element")
    clifford = build_clifford(presentation, central)
    E = clifford.algebra
    label_index = {lbl: k for k, lbl in enumerate(E.labels)}
    try:
        basis = GradedBasisM2({
            (0, 1): _matrix2(doc["basis"]["I0_1"]),
            (0, 2): _matrix2(doc["basis"]["I0_2"]),
            (1, 1): _matrix2(doc["basis"]["I1_1"]),
            (1, 2): _matrix2(doc["basis"]["I1_2"]),
        })
    except KeyError as exc:
        raise ParseError(f"missing basis member: {exc}") from exc
    tables = []
    for name in ("theta0", "theta1"):
        if name not in doc:
            raise ParseError(f"missing table {name}")
        block = doc[name]
        entries = []
        for j in (0, 1):
            row = []
            for jp in (0, 1):
                mapping = block[j][jp]
                cols = [dict() for _ in range(E.dim)]
                for src, image in mapping.items():
                    if src not in label_index:
                        raise ParseError(f"unknown basis label {src!r}")
                    col = {}
                    for dst, coeff in image.items():
                        if dst not in label_index:
                            raise ParseError(f"unknown basis label {dst!r}")
                        col[label_index[dst]] = parse_scalar(coeff)
                    cols[label_index[src]] = col
                row.append(GradedLinMap(E, E, cols))
            entries.append(row)
        tables.append(MatrixHom(entries))
    return TwistingSystemM2(E, tuple(tables), basis), clifford


def _matrix2(rows):
    if len(rows) != 2 or any(len(r) != 2 for r in rows):
        raise ParseError("basis members must be 2x2")
    return tuple(tuple(parse_scalar(x) for x in row) for row in rows)


def load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad JSON in {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# serialization helpers


def presentation_doc(presentation, central=None):
    names = presentation.generators
    rels = []
    for element in presentation.relation_elements():
        rels.append({" ".join(names[a] for a in word): coeff.text()
                     for word, coeff in element.items()})
    doc = {"generators": list(names), "relations": rels}
    if central is not None:
        doc["central"] = {" ".join(names[a] for a in word): coeff.text()
                          for word, coeff in central.items()}
    return doc


def algebra_summary(clifford):
    """Deterministic summary lines for a built deformation."""
    from .algebra import radical, strongly_graded_check

    algebra = clifford.algebra
    even = len(algebra.component_indices((0,)))
    odd = len(algebra.component_indices((1,)))
    lines = [
        f"dimension: {algebra.dim}",
        f"component dims: even {even}, odd {odd}",
        f"radical dim: {radical(algebra).dim}",
        f"strongly graded: {'yes' if strongly_graded_check(algebra) else 'no'}",
        "basis: " + ", ".join(algebra.labels),
    ]
    return lines
