"""First-order terms over a signature, plus matching and unification.

Three kinds of nodes: variables, operation applications, and element
constants.  Element constants name members of concrete algebras and are
tagged by the algebra they come from (the tag ``B`` marks elements of a
shared subalgebra); they never occur in rule patterns.

Positions are 1-based child-index sequences; the empty tuple is the root.

The concrete syntax is s-expressions: ``(t 0 x (q x y 0))``.  An atom
that names a nullary operation denotes that operation, an atom of the
form ``name@tag`` denotes a tagged element constant, and every other
atom is a variable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Union

from .errors import InvalidPositionError, ParseError


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class App:
    symbol: str
    args: tuple = ()

    def __str__(self):
        if not self.args:
            return self.symbol
        return "(%s %s)" % (self.symbol, " ".join(str(a) for a in self.args))


@dataclass(frozen=True)
class Elem:
    tag: str
    name: str

    def __str__(self):
        return "%s@%s" % (self.name, self.tag)


Term = Union[Var, App, Elem]
Position = tuple  # of ints, 1-based
Substitution = dict  # variable name -> Term


@dataclass(frozen=True)
class Signature:
    """Operation symbols with their arities."""

    arities: tuple  # of (name, arity) pairs

    def __post_init__(self):
        names = [n for n, _ in self.arities]
        if len(names) != len(set(names)):
            raise ValueError("duplicate symbol names in signature")
        if any(k < 0 for _, k in self.arities):
            raise ValueError("negative arity")

    def arity(self, symbol: str) -> Optional[int]:
        for name, k in self.arities:
            if name == symbol:
                return k
        return None

    @property
    def nullary(self) -> tuple:
        return tuple(n for n, k in self.arities if k == 0)


#: The signature of ternary rings: two ternary operations and two constants.
TERNARY_SIGNATURE = Signature((("t", 3), ("q", 3), ("0", 0), ("1", 0)))


def is_well_formed(term: Term, signature: Signature) -> bool:
    """True iff every applied symbol belongs to the signature with the
    right number of children."""
    if isinstance(term, (Var, Elem)):
        return True
    k = signature.arity(term.symbol)
    if k is None or k != len(term.args):
        return False
    return all(is_well_formed(a, signature) for a in term.args)


def subterm_at(term: Term, pos: Position) -> Term:
    """The subterm of ``term`` at ``pos``."""
    for i in pos:
        if not isinstance(term, App) or not 1 <= i <= len(term.args):
            raise InvalidPositionError("no subterm at position %r" % (pos,))
        term = term.args[i - 1]
    return term


def replace_at(term: Term, pos: Position, repl: Term) -> Term:
    """A copy of ``term`` with the subterm at ``pos`` replaced by ``repl``."""
    if not pos:
        return repl
    i = pos[0]
    if not isinstance(term, App) or not 1 <= i <= len(term.args):
        raise InvalidPositionError("no subterm at position %r" % (pos,))
    args = list(term.args)
    args[i - 1] = replace_at(args[i - 1], pos[1:], repl)
    return App(term.symbol, tuple(args))


def positions(term: Term, prefix: Position = ()) -> Iterator[tuple]:
    """All (position, subterm) pairs of ``term``, in preorder."""
    yield prefix, term
    if isinstance(term, App):
        for i, arg in enumerate(term.args, start=1):
            yield from positions(arg, prefix + (i,))


def variables_of(term: Term) -> set:
    """The set of variable names occurring in ``term``."""
    if isinstance(term, Var):
        return {term.name}
    if isinstance(term, App):
        out = set()
        for a in term.args:
            out |= variables_of(a)
        return out
    return set()


def variable_multiplicities(term: Term) -> dict:
    """How often each variable occurs in ``term``."""
    counts: dict = {}
    for _, sub in positions(term):
        if isinstance(sub, Var):
            counts[sub.name] = counts.get(sub.name, 0) + 1
    return counts


def size(term: Term) -> int:
    """Total node count: variables, element constants and every operation
    symbol (nullary ones included) each count 1."""
    if isinstance(term, App):
        return 1 + sum(size(a) for a in term.args)
    return 1


def symbol_count(term: Term) -> int:
    """Number of operation-symbol nodes in ``term``."""
    if isinstance(term, App):
        return 1 + sum(symbol_count(a) for a in term.args)
    return 0


def substitute(term: Term, subst: Substitution) -> Term:
    """Apply a substitution; unmapped variables stay as themselves."""
    if isinstance(term, Var):
        return subst.get(term.name, term)
    if isinstance(term, App) and term.args:
        return App(term.symbol, tuple(substitute(a, subst) for a in term.args))
    return term


def match(pattern: Term, subject: Term) -> Optional[Substitution]:
    """Find a substitution sending ``pattern`` onto ``subject``, or None.

    Repeated pattern variables must bind structurally equal subterms.
    Ground pattern leaves (nullary symbols, element constants) match only
    themselves.
    """
    binding: Substitution = {}
    stack = [(pattern, subject)]
    while stack:
        p, s = stack.pop()
        if isinstance(p, Var):
            if p.name in binding:
                if binding[p.name] != s:
                    return None
            else:
                binding[p.name] = s
        elif isinstance(p, App):
            if not isinstance(s, App) or p.symbol != s.symbol:
                return None
            stack.extend(zip(p.args, s.args))
        else:  # Elem
            if p != s:
                return None
    return binding


def _occurs(name: str, term: Term, subst: Substitution) -> bool:
    stack = [term]
    while stack:
        t = stack.pop()
        if isinstance(t, Var):
            if t.name == name:
                return True
            if t.name in subst:
                stack.append(subst[t.name])
        elif isinstance(t, App):
            stack.extend(t.args)
    return False


def unify(t1: Term, t2: Term) -> Optional[Substitution]:
    """Most general unifier of two terms, with occurs check, or None.

    The result is idempotent: no bound variable occurs in any binding
    after full application.
    """
    subst: Substitution = {}

    def resolve(t: Term) -> Term:
        while isinstance(t, Var) and t.name in subst:
            t = subst[t.name]
        return t

    stack = [(t1, t2)]
    while stack:
        a, b = stack.pop()
        a, b = resolve(a), resolve(b)
        if a == b:
            continue
        if isinstance(a, Var):
            if _occurs(a.name, b, subst):
                return None
            subst[a.name] = b
        elif isinstance(b, Var):
            if _occurs(b.name, a, subst):
                return None
            subst[b.name] = a
        elif isinstance(a, App) and isinstance(b, App) and a.symbol == b.symbol:
            stack.extend(zip(a.args, b.args))
        else:
            return None

    # Flatten chains so each binding is fully applied.
    def walk(t: Term) -> Term:
        t = resolve(t)
        if isinstance(t, App) and t.args:
            return App(t.symbol, tuple(walk(a) for a in t.args))
        return t

    return {name: walk(Var(name)) for name in subst}


def rename_variables(term: Term, mapping: dict) -> Term:
    """Rename variables via a name-to-name map (fresh names for overlap
    computations, canonical names for pair classes)."""
    if isinstance(term, Var):
        return Var(mapping.get(term.name, term.name))
    if isinstance(term, App) and term.args:
        return App(term.symbol, tuple(rename_variables(a, mapping) for a in term.args))
    return term


# ---------------------------------------------------------------------------
# concrete syntax


def _tokenize(text: str) -> list:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()":
            tokens.append(c)
            i += 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in "()":
                j += 1
            tokens.append(text[i:j])
            i = j
    return tokens


def _atom(token: str, signature: Signature) -> Term:
    if "@" in token:
        name, _, tag = token.rpartition("@")
        if not name or not tag:
            raise ParseError("malformed element constant %r" % token)
        return Elem(tag, name)
    k = signature.arity(token)
    if k == 0:
        return App(token)
    if k is not None:
        raise ParseError("symbol %r of arity %d needs arguments" % (token, k))
    if not token[0].isalpha() or not token.islower():
        raise ParseError("invalid variable name %r" % token)
    return Var(token)


def parse_term(text: str, signature: Signature = TERNARY_SIGNATURE) -> Term:
    """Parse the s-expression syntax into a term over ``signature``."""
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty term")
    pos = 0

    def parse() -> Term:
        nonlocal pos
        if pos >= len(tokens):
            raise ParseError("unexpected end of input in %r" % text)
        tok = tokens[pos]
        pos += 1
        if tok == ")":
            raise ParseError("unexpected ')' in %r" % text)
        if tok != "(":
            return _atom(tok, signature)
        if pos >= len(tokens) or tokens[pos] in "()":
            raise ParseError("expected a symbol after '(' in %r" % text)
        symbol = tokens[pos]
        pos += 1
        k = signature.arity(symbol)
        if k is None:
            raise ParseError("unknown symbol %r" % symbol)
        args = []
        while pos < len(tokens) and tokens[pos] != ")":
            args.append(parse())
        if pos >= len(tokens):
            raise ParseError("missing ')' in %r" % text)
        pos += 1
        if len(args) != k:
            raise ParseError(
                "symbol %r expects %d arguments, got %d" % (symbol, k, len(args))
            )
        return App(symbol, tuple(args))

    term = parse()
    if pos != len(tokens):
        raise ParseError("trailing input in %r" % text)
    return term


def format_term(term: Term) -> str:
    """Inverse of :func:`parse_term`."""
    return str(term)
