"""Selection expression language.

Grammar (case-insensitive keywords, whitespace-separated):

    expr     := or_expr
    or_expr  := and_expr ("or" and_expr)*
    and_expr := unary ("and" unary)*
    unary    := "not" unary | primary
    primary  := "(" expr ")" | "all" | "none"
              | "chain" ID | "resid" N[-M] | "resname" NAME
              | "element" SYM | "within" RADIUS "of" "(" expr ")"

Unknown chain/residue/element names select nothing (not an error); syntax
problems raise SelectionSyntaxError with the offending position.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from ..errors import SelectionSyntaxError
from ..spatial import SpatialHash

_TOKEN_RE = re.compile(r"\(|\)|[^\s()]+")


@dataclass(frozen=True)
class Selection:
    molecule: str
    atom_indices: np.ndarray      # sorted unique
    source_expression: str

    def __len__(self):
        return len(self.atom_indices)


def select(mol, expr: str, molecule_name: str | None = None) -> Selection:
    mask = evaluate(mol, expr)
    return Selection(
        molecule=molecule_name or mol.name,
        atom_indices=np.flatnonzero(mask).astype(np.int64),
        source_expression=expr,
    )


def evaluate(mol, expr: str) -> np.ndarray:
    """Boolean mask over the molecule's atoms."""
    tokens = [(m.group(0), m.start()) for m in _TOKEN_RE.finditer(expr)]
    parser = _Parser(mol, expr, tokens)
    mask = parser.parse_expr()
    parser.expect_end()
    return mask


class _Parser:
    def __init__(self, mol, expr, tokens):
        self.mol = mol
        self.expr = expr
        self.tokens = tokens
        self.pos = 0

    # -- token plumbing ------------------------------------------------------

    def peek(self):
        if self.pos < len(self.tokens):
            return self.tokens[self.pos][0].lower()
        return None

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def caret(self):
        if self.pos < len(self.tokens):
            return self.tokens[self.pos][1]
        return len(self.expr)

    def fail(self, message):
        raise SelectionSyntaxError(message, self.expr, self.caret())

    def expect(self, word):
        if self.peek() != word:
            self.fail(f"expected {word!r}")
        return self.advance()

    def expect_end(self):
        if self.pos != len(self.tokens):
            self.fail("unexpected trailing input")

    # -- grammar ---------------------------------------------------------------

    def parse_expr(self):
        mask = self.parse_and()
        while self.peek() == "or":
            self.advance()
            mask = mask | self.parse_and()
        return mask

    def parse_and(self):
        mask = self.parse_unary()
        while self.peek() == "and":
            self.advance()
            mask = mask & self.parse_unary()
        return mask

    def parse_unary(self):
        if self.peek() == "not":
            self.advance()
            return ~self.parse_unary()
        return self.parse_primary()

    def parse_primary(self):
        mol = self.mol
        n = mol.n_atoms
        tok = self.peek()
        if tok is None:
            self.fail("expression ended early")
        if tok == "(":
            self.advance()
            mask = self.parse_expr()
            self.expect(")")
            return mask
        if tok == "all":
            self.advance()
            return np.ones(n, dtype=bool)
        if tok == "none":
            self.advance()
            return np.zeros(n, dtype=bool)
        if tok == "chain":
            self.advance()
            ident = self._word("chain id")
            return mol.chain_ids == ident
        if tok == "resname":
            self.advance()
            name = self._word("residue name").upper()
            return np.char.upper(mol.res_names.astype("U5")) == name
        if tok == "element":
            self.advance()
            sym = self._word("element symbol")
            sym = sym[0].upper() + sym[1:].lower()
            return mol.elements == sym
        if tok == "resid":
            self.advance()
            word, start = self._word_tok("residue number")
            m = re.fullmatch(r"(-?\d+)(?:-(-?\d+))?", word)
            if not m:
                raise SelectionSyntaxError("expected N or N-M", self.expr, start)
            lo = int(m.group(1))
            hi = int(m.group(2)) if m.group(2) is not None else lo
            return (mol.res_seqs >= lo) & (mol.res_seqs <= hi)
        if tok == "within":
            self.advance()
            word, start = self._word_tok("radius")
            try:
                radius = float(word)
            except ValueError:
                raise SelectionSyntaxError("expected a number", self.expr, start) from None
            if radius <= 0:
                raise SelectionSyntaxError("radius must be positive", self.expr, start)
            self.expect("of")
            self.expect("(")
            inner = self.parse_expr()
            self.expect(")")
            return _within(mol, inner, radius)
        self.fail(f"unknown keyword {tok!r}")

    def _word(self, what):
        return self._word_tok(what)[0]

    def _word_tok(self, what):
        if self.peek() in (None, "(", ")"):
            self.fail(f"expected {what}")
        raw, start = self.advance()
        return raw, start


def _within(mol, inner_mask: np.ndarray, radius: float) -> np.ndarray:
    ref = mol.coords[inner_mask]
    if len(ref) == 0:
        return np.zeros(mol.n_atoms, dtype=bool)
    grid = SpatialHash(ref, cell_size=radius)
    return grid.near_mask(mol.coords, radius)
