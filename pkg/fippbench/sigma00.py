"""
Bounded (Σ⁰₀) formulas with one set parameter f.

Grammar:

    formula := quant | iff
    quant   := ("forall" | "exists") var "<" term "." formula
    iff     := imp ("<->" imp)*
    imp     := or ("->" or)*
    or      := and ("|" and)*
    and     := not ("&" not)*
    not     := "!" not | quant | atom | "(" formula ")"
    atom    := term ("in f" | "=" term | "<=" term | "<" term)
    term    := prod ("+" prod)*
    prod    := factor ("*" factor)*
    factor  := nat | var | "pair(" term "," term ")" | "(" term ")"

An atom "t in f" holds iff unpair(t) = (i, j) with f(i) = j. "->" and
"<->" associate to the right, the other connectives to the left.
"""
import itertools
import logging
import re
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple, Union

from .codec import CodeLike, SeqCode, as_code, pair, unpair
from .streams import EvPeriodic, extend_zero

logger = logging.getLogger(__name__)

KEYWORDS = frozenset({"forall", "exists", "in", "pair", "f"})


class FormulaError(ValueError):
    pass


class FormulaSyntaxError(FormulaError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnboundSetError(FormulaError):
    def __init__(self, name: str, position: int):
        super().__init__(f"unknown set '{name}' at position {position}: only f is bound")
        self.name = name
        self.position = position


class UnboundVariableError(FormulaError):
    def __init__(self, names: Iterable[str]):
        self.names = sorted(set(names))
        super().__init__("unbound variable(s): " + ", ".join(self.names))


# Terms

@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Add:
    left: 'Term'
    right: 'Term'


@dataclass(frozen=True)
class Mul:
    left: 'Term'
    right: 'Term'


@dataclass(frozen=True)
class Pair:
    left: 'Term'
    right: 'Term'


Term = Union[Const, Var, Add, Mul, Pair]


# Formulas

@dataclass(frozen=True)
class Member:
    term: Term


@dataclass(frozen=True)
class Compare:
    op: str  # '=' | '<=' | '<'
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    body: 'Formula'


@dataclass(frozen=True)
class Binary:
    op: str  # '&' | '|' | '->' | '<->'
    left: 'Formula'
    right: 'Formula'


@dataclass(frozen=True)
class Quant:
    kind: str  # 'forall' | 'exists'
    var: str
    bound: Term
    body: 'Formula'


Formula = Union[Member, Compare, Not, Binary, Quant]

_TOKEN_RE = re.compile(r"\s*(?:(<->|->|<=|[<=&|!().,+*])|(\d+)|([A-Za-z_][A-Za-z0-9_]*))")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("op", m.group(1), start))
        elif m.group(2):
            tokens.append(("nat", m.group(2), start))
        else:
            tokens.append(("name", m.group(3), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> Tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> Tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str) -> None:
        kind, text, pos = self.take()
        if text != value or kind == "end":
            raise FormulaSyntaxError(f"expected {value!r}, found {text or 'end of input'!r}", pos)

    def at(self, value: str) -> bool:
        kind, text, _ = self.peek()
        return kind != "end" and text == value

    def formula(self) -> Formula:
        return self.iff()

    def quant(self) -> Formula:
        _, kind, _ = self.take()
        var = self.variable()
        self.expect("<")
        bound = self.term()
        self.expect(".")
        return Quant(kind, var, bound, self.formula())

    def iff(self) -> Formula:
        left = self.imp()
        if self.at("<->"):
            self.take()
            return Binary("<->", left, self.iff())
        return left

    def imp(self) -> Formula:
        left = self.disj()
        if self.at("->"):
            self.take()
            return Binary("->", left, self.imp())
        return left

    def disj(self) -> Formula:
        left = self.conj()
        while self.at("|"):
            self.take()
            left = Binary("|", left, self.conj())
        return left

    def conj(self) -> Formula:
        left = self.neg()
        while self.at("&"):
            self.take()
            left = Binary("&", left, self.neg())
        return left

    def neg(self) -> Formula:
        if self.at("!"):
            self.take()
            return Not(self.neg())
        if self.at("forall") or self.at("exists"):
            return self.quant()
        if self.at("("):
            mark = self.i
            try:
                return self.atom()
            except FormulaSyntaxError:
                self.i = mark
            self.take()
            inner = self.formula()
            self.expect(")")
            return inner
        return self.atom()

    def atom(self) -> Formula:
        left = self.term()
        kind, text, pos = self.take()
        if text == "in" and kind == "name":
            _, name, npos = self.take()
            if name != "f":
                if not name:
                    raise FormulaSyntaxError("expected a set name", npos)
                raise UnboundSetError(name, npos)
            return Member(left)
        if kind == "op" and text in ("=", "<=", "<"):
            return Compare(text, left, self.term())
        raise FormulaSyntaxError(f"expected 'in f' or a comparison, found {text or 'end of input'!r}", pos)

    def term(self) -> Term:
        left = self.prod()
        while self.at("+"):
            self.take()
            left = Add(left, self.prod())
        return left

    def prod(self) -> Term:
        left = self.factor()
        while self.at("*"):
            self.take()
            left = Mul(left, self.factor())
        return left

    def factor(self) -> Term:
        kind, text, pos = self.peek()
        if kind == "nat":
            self.take()
            return Const(int(text))
        if kind == "name" and text == "pair":
            self.take()
            self.expect("(")
            left = self.term()
            self.expect(",")
            right = self.term()
            self.expect(")")
            return Pair(left, right)
        if kind == "op" and text == "(":
            self.take()
            inner = self.term()
            self.expect(")")
            return inner
        return Var(self.variable())

    def variable(self) -> str:
        kind, text, pos = self.take()
        if kind != "name" or text in KEYWORDS:
            raise FormulaSyntaxError(f"expected a variable, found {text or 'end of input'!r}", pos)
        return text


def parse(text: str, free_vars: Optional[Iterable[str]] = None) -> Formula:
    """
    Parse a formula. When free_vars is given, every variable must be bound
    by a quantifier or listed there.
    """
    p = _Parser(text)
    phi = p.formula()
    kind, tail, pos = p.peek()
    if kind != "end":
        raise FormulaSyntaxError(f"unexpected {tail!r}", pos)
    if free_vars is not None:
        extra = free_variables(phi) - set(free_vars)
        if extra:
            raise UnboundVariableError(extra)
    return phi


def pretty_term(t: Term) -> str:
    if isinstance(t, Const):
        return str(t.value)
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Pair):
        return f"pair({pretty_term(t.left)},{pretty_term(t.right)})"
    op = "+" if isinstance(t, Add) else "*"
    return f"({pretty_term(t.left)}{op}{pretty_term(t.right)})"


def pretty(phi: Formula) -> str:
    """Fully parenthesized rendering; parse(pretty(phi)) == phi."""
    if isinstance(phi, Member):
        return f"{pretty_term(phi.term)} in f"
    if isinstance(phi, Compare):
        return f"{pretty_term(phi.left)}{phi.op}{pretty_term(phi.right)}"
    if isinstance(phi, Not):
        return f"!({pretty(phi.body)})"
    if isinstance(phi, Binary):
        return f"({pretty(phi.left)}) {phi.op} ({pretty(phi.right)})"
    return f"{phi.kind} {phi.var}<{pretty_term(phi.bound)}. ({pretty(phi.body)})"


def term_variables(t: Term) -> Set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Const):
        return set()
    return term_variables(t.left) | term_variables(t.right)


def free_variables(phi: Formula) -> Set[str]:
    if isinstance(phi, Member):
        return term_variables(phi.term)
    if isinstance(phi, Compare):
        return term_variables(phi.left) | term_variables(phi.right)
    if isinstance(phi, Not):
        return free_variables(phi.body)
    if isinstance(phi, Binary):
        return free_variables(phi.left) | free_variables(phi.right)
    return term_variables(phi.bound) | (free_variables(phi.body) - {phi.var})


def mentions_f(phi: Formula) -> bool:
    if isinstance(phi, Member):
        return True
    if isinstance(phi, Compare):
        return False
    if isinstance(phi, Not):
        return mentions_f(phi.body)
    if isinstance(phi, Binary):
        return mentions_f(phi.left) or mentions_f(phi.right)
    return mentions_f(phi.body)


def term_value(t: Term, env: Mapping[str, int]) -> int:
    if isinstance(t, Const):
        return t.value
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise UnboundVariableError([t.name]) from None
    a, b = term_value(t.left, env), term_value(t.right, env)
    if isinstance(t, Add):
        return a + b
    if isinstance(t, Mul):
        return a * b
    return pair(a, b)


def term_bound(t: Term, z: int) -> int:
    """w with t ≤ w whenever every variable is ≤ z (terms are monotone)."""
    if isinstance(t, Const):
        return t.value
    if isinstance(t, Var):
        return z
    a, b = term_bound(t.left, z), term_bound(t.right, z)
    if isinstance(t, Add):
        return a + b
    if isinstance(t, Mul):
        return a * b
    return pair(a, b)


def substitute(t: Term, var: str, by: Term) -> Term:
    if isinstance(t, Var):
        return by if t.name == var else t
    if isinstance(t, Const):
        return t
    return type(t)(substitute(t.left, var, by), substitute(t.right, var, by))


Membership = Callable[[int], bool]


def _holds(phi: Formula, env: Dict[str, int], member: Membership) -> bool:
    if isinstance(phi, Member):
        return member(term_value(phi.term, env))
    if isinstance(phi, Compare):
        a, b = term_value(phi.left, env), term_value(phi.right, env)
        if phi.op == "=":
            return a == b
        if phi.op == "<=":
            return a <= b
        return a < b
    if isinstance(phi, Not):
        return not _holds(phi.body, env, member)
    if isinstance(phi, Binary):
        a = _holds(phi.left, env, member)
        if phi.op == "&":
            return a and _holds(phi.right, env, member)
        if phi.op == "|":
            return a or _holds(phi.right, env, member)
        if phi.op == "->":
            return (not a) or _holds(phi.right, env, member)
        return a == _holds(phi.right, env, member)
    bound = term_value(phi.bound, env)
    inner = dict(env)
    for i in range(bound):
        inner[phi.var] = i
        value = _holds(phi.body, inner, member)
        if phi.kind == "forall" and not value:
            return False
        if phi.kind == "exists" and value:
            return True
    return phi.kind == "forall"


def function_membership(f: Callable[[int], int]) -> Membership:
    def member(q: int) -> bool:
        i, j = unpair(q)
        return f(i) == j
    return member


def prefix_membership(a: Sequence[int]) -> Membership:
    """The A' reading: q ∈ a iff unpair(q) = (i, j) with i < lh a and a(i) = j."""
    def member(q: int) -> bool:
        i, j = unpair(q)
        return i < len(a) and a[i] == j
    return member


def evaluate(phi: Formula, env: Mapping[str, int], f: EvPeriodic) -> bool:
    """Classical truth of A(f, x⃗) under env."""
    missing = free_variables(phi) - set(env)
    if missing:
        raise UnboundVariableError(missing)
    return _holds(phi, dict(env), function_membership(f))


def modulus(phi: Formula, z: int) -> int:
    """
    y such that f̄y = ḡy implies A(f, x⃗) ↔ A(g, x⃗) for all x⃗ ≤ z. Safe
    over-approximation, not the least such y.
    """
    if isinstance(phi, Member):
        return term_bound(phi.term, z) + 1
    if isinstance(phi, Compare):
        return 0
    if isinstance(phi, Not):
        return modulus(phi.body, z)
    if isinstance(phi, Binary):
        return max(modulus(phi.left, z), modulus(phi.right, z))
    return modulus(phi.body, max(z, term_bound(phi.bound, z)))


def _plus(a: Term, b: Term) -> Term:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    if a == Const(0):
        return b
    if b == Const(0):
        return a
    return Add(a, b)


def threshold(phi: Formula) -> Term:
    """Term t with m ≥ t → (A(f) ↔ A'(f̄m))."""
    if isinstance(phi, Member):
        return _plus(phi.term, Const(1))
    if isinstance(phi, Compare):
        return Const(0)
    if isinstance(phi, Not):
        return threshold(phi.body)
    if isinstance(phi, Binary):
        return _plus(threshold(phi.left), threshold(phi.right))
    # t'(i) is monotone in i, so t'(bound) covers every i < bound
    return substitute(threshold(phi.body), phi.var, phi.bound)


def _items(a: Union[CodeLike, Sequence[int]]) -> Tuple[int, ...]:
    if isinstance(a, (SeqCode, int)):
        return as_code(a).items
    return tuple(a)


def _env_bound(env: Mapping[str, int]) -> int:
    return max(env.values(), default=0)


@dataclass(frozen=True)
class BarPredicate:
    """C(a) :≡ lh a ≥ t → A'(a), so that A(f) ↔ ∀m C(f̄m)."""
    formula: Formula
    threshold: Term

    def threshold_value(self, env: Optional[Mapping[str, int]] = None) -> int:
        return term_value(self.threshold, env or {})

    def decide(self, a: Union[CodeLike, Sequence[int]], env: Optional[Mapping[str, int]] = None) -> bool:
        items = _items(a)
        env = dict(env or {})
        if len(items) < self.threshold_value(env):
            return True
        return _holds(self.formula, env, prefix_membership(items))

    def certified_bound(self, env: Optional[Mapping[str, int]] = None) -> int:
        """Checking C(f̄m) for m up to this bound decides ∀m C(f̄m)."""
        env = env or {}
        return max(self.threshold_value(env), modulus(self.formula, _env_bound(env)))

    def holds_along(self, f: EvPeriodic, env: Optional[Mapping[str, int]] = None) -> bool:
        values = f.values(self.certified_bound(env) + 1)
        return all(self.decide(values[:m], env) for m in range(len(values)))


def compile_bar(phi: Formula) -> BarPredicate:
    bar = BarPredicate(phi, threshold(phi))
    logger.debug("compiled bar form of %s with threshold %s", pretty(phi), pretty_term(bar.threshold))
    return bar


def clamped_membership(m: Sequence[int], n: int) -> Membership:
    """C(m, t, n): t ∈ f for f(i) = min(n, m(i)) below lh m and 0 beyond."""
    def member(q: int) -> bool:
        i, j = unpair(q)
        return j == (min(n, m[i]) if i < len(m) else 0)
    return member


@dataclass(frozen=True)
class ClosedDecision:
    """B(m) with ∀f : ℕ → [n] A(f) ↔ ∀m B(m)."""
    formula: Formula
    n: int

    def holds(self, m: Union[CodeLike, Sequence[int]], env: Optional[Mapping[str, int]] = None) -> bool:
        items = _items(m)
        return _holds(self.formula, dict(env or {}), clamped_membership(items, self.n))

    def forall_certified(self, env: Optional[Mapping[str, int]] = None) -> bool:
        """∀m B(m), deciding it over the [n]-sequences of modulus length."""
        env = env or {}
        length = modulus(self.formula, _env_bound(env))
        return all(self.holds(m, env) for m in itertools.product(range(self.n + 1), repeat=length))


def compile_closed(phi: Formula, n: int) -> ClosedDecision:
    if n < 0:
        raise ValueError("n must be a natural")
    return ClosedDecision(phi, n)


def forall_f(phi: Formula, n: int, env: Optional[Mapping[str, int]] = None) -> bool:
    """∀f : ℕ → [n] A(f), by brute force over zero-extended prefixes of modulus length."""
    env = env or {}
    length = modulus(phi, _env_bound(env))
    return all(evaluate(phi, env, extend_zero(prefix))
               for prefix in itertools.product(range(n + 1), repeat=length))
