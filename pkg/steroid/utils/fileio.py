"""Text formats for tensors and decompositions.

Tensor files start with ``symtensor <d> <n>``. The orbit form follows with one
``<i_1> ... <i_d> <value>`` line per orbit (1-based indices); the dense form
has a ``dense`` line followed by ``n**d`` values in first-index-fastest order.
Decomposition files start with ``steroid-decomposition <d> <n> <R>``, list one
``<lambda> <v_1> ... <v_n>`` line per term and end with ``residual <value>``.
Blank lines and lines starting with ``#`` are ignored.
"""
from pathlib import Path
from typing import Iterator, List, Tuple

import numpy as np

from ..config import FLOAT_DIGITS
from ..exceptions import ParseError
from ..schemas.decomposition import Decomposition, SteroidReport, Term
from ..schemas.tensor import SymTensor
from ..services.steroid import r_max
from ..services.symtensor import as_symmetric, new_symmetric, orbit_table


TENSOR_HEADER = "symtensor"
DENSE_MARKER = "dense"
DECOMPOSITION_HEADER = "steroid-decomposition"
RESIDUAL_MARKER = "residual"

Line = Tuple[int, List[str]]


def format_float(value: float) -> str:
    return format(float(value), f".{FLOAT_DIGITS}g")


def _lines(text: str) -> Iterator[Line]:
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if stripped and not stripped.startswith("#"):
            yield number, stripped.split()


def _int(token: str, line: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"invalid {what} {token!r}", line)


def _float(token: str, line: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"invalid number {token!r}", line)
    if not np.isfinite(value):
        raise ParseError(f"non-finite number {token!r}", line)
    return value


def _header(lines: List[Line], keyword: str, fields: int) -> Tuple[int, List[int]]:
    if not lines:
        raise ParseError(f"empty file, expected '{keyword}' header", 1)
    number, tokens = lines[0]
    if tokens[0] != keyword or len(tokens) != fields + 1:
        raise ParseError(f"expected '{keyword}' header with {fields} fields", number)
    values = [_int(token, number, "header field") for token in tokens[1:]]
    if any(value < 0 for value in values) or any(value == 0 for value in values[:2]):
        raise ParseError("header fields must be positive", number)
    return number, values


def parse_tensor(text: str, sym_tol: float = 1e-12) -> SymTensor:
    lines = list(_lines(text))
    _, (order, dim) = _header(lines, TENSOR_HEADER, 2)
    body = lines[1:]

    if body and body[0][1] == [DENSE_MARKER]:
        marker_line = body[0][0]
        values = [_float(token, number) for number, tokens in body[1:] for token in tokens]
        if len(values) != dim ** order:
            raise ParseError(f"dense form needs {dim ** order} values, got {len(values)}", marker_line)
        array = np.reshape(np.array(values), (dim,) * order, order="F")
        return as_symmetric(array, sym_tol)

    entries = []
    seen = {}
    for number, tokens in body:
        if len(tokens) != order + 1:
            raise ParseError(f"expected {order} indices and a value", number)
        index = tuple(_int(token, number, "index") for token in tokens[:-1])
        if any(i < 1 or i > dim for i in index):
            raise ParseError(f"index {index} out of range [1, {dim}]", number)
        value = _float(tokens[-1], number)
        orbit = tuple(sorted(index, reverse=True))
        if orbit in seen and seen[orbit][0] != value:
            first_value, first_line = seen[orbit]
            raise ParseError(
                f"conflicting values {first_value!r} and {value!r} on orbit {orbit} "
                f"(first given on line {first_line})",
                number,
            )
        seen.setdefault(orbit, (value, number))
        entries.append((index, value))
    return new_symmetric(order, dim, entries)


def format_tensor(tensor: SymTensor) -> str:
    """Orbit form: one line per non-zero orbit, indices non-increasing."""
    table = orbit_table(tensor.order, tensor.dim)
    lines = [f"{TENSOR_HEADER} {tensor.order} {tensor.dim}"]
    for representative in table.representatives:
        index = tuple(int(i) for i in representative[::-1])
        value = tensor.data[index]
        if value != 0.0:
            indices = " ".join(str(i + 1) for i in index)
            lines.append(f"{indices} {format_float(value)}")
    return "\n".join(lines) + "\n"


def _read_text(path: Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}")


def read_tensor(path: Path, sym_tol: float = 1e-12) -> SymTensor:
    return parse_tensor(_read_text(path), sym_tol)


def write_tensor(path: Path, tensor: SymTensor) -> None:
    Path(path).write_text(format_tensor(tensor), encoding="utf-8")


def parse_decomposition(text: str) -> Decomposition:
    lines = list(_lines(text))
    header_line, (order, dim, count) = _header(lines, DECOMPOSITION_HEADER, 3)
    body = lines[1:]
    if len(body) != count + 1:
        raise ParseError(f"expected {count} term lines and a residual line", header_line)

    terms = []
    for number, tokens in body[:count]:
        if len(tokens) != dim + 1:
            raise ParseError(f"expected a coefficient and {dim} vector entries", number)
        values = [_float(token, number) for token in tokens]
        terms.append(Term(coefficient=values[0], vector=np.array(values[1:])))

    number, tokens = body[count]
    if len(tokens) != 2 or tokens[0] != RESIDUAL_MARKER:
        raise ParseError(f"expected '{RESIDUAL_MARKER} <value>'", number)
    residual = _float(tokens[1], number)
    if residual < 0:
        raise ParseError("residual must be non-negative", number)

    return Decomposition(
        order=order,
        dim=dim,
        terms=terms,
        residual_norm=residual,
        report=SteroidReport(r_max=r_max(order, dim)),
    )


def format_decomposition(dec: Decomposition) -> str:
    lines = [f"{DECOMPOSITION_HEADER} {dec.order} {dec.dim} {dec.rank}"]
    for term in dec.terms:
        entries = " ".join(format_float(x) for x in term.vector)
        lines.append(f"{format_float(term.coefficient)} {entries}")
    lines.append(f"{RESIDUAL_MARKER} {format_float(dec.residual_norm)}")
    return "\n".join(lines) + "\n"


def read_decomposition(path: Path) -> Decomposition:
    return parse_decomposition(_read_text(path))


def write_decomposition(path: Path, dec: Decomposition) -> None:
    Path(path).write_text(format_decomposition(dec), encoding="utf-8")

