"""Ground an action description into an explicit deterministic transition system.

Per-fluent value resolution in a successor state is: direct dynamic effect,
then inertia, then default; static laws are closed last and may override
inertial or defaulted values but never a direct effect.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union

from .action_language import (
    ActionDescription,
    Atom,
    Const,
    LawKind,
    Var,
    parse_action_term,
    parse_atoms,
    validate,
)

GroundAction = tuple  # (name, *args)
FluentKey = tuple  # (name, *args)


class GroundingError(RuntimeError):
    pass


class IncompleteStateError(GroundingError):
    def __init__(self, missing: list):
        self.missing = missing
        super().__init__("unvalued fluents: " + ", ".join(fmt_key(k) for k in missing))


class ContradictionError(GroundingError):
    pass


class TransitionConflict(GroundingError):
    pass


def fmt_key(key: FluentKey) -> str:
    name, *args = key
    return f"{name}({','.join(map(str, args))})" if args else name


def fmt_action(action: GroundAction) -> str:
    return fmt_key(action)


@dataclass(frozen=True)
class GroundLaw:
    kind: LawKind
    head: tuple | None  # (fluent index, value)
    body: tuple  # ((fluent index, value), ...)
    action: GroundAction | None = None


class SymbolicState:
    """Total assignment of values to the ground fluents of one domain."""

    __slots__ = ("values", "_domain", "_hash")

    def __init__(self, values: tuple, domain: "GroundDomain"):
        self.values = values
        self._domain = domain
        self._hash = hash(values)

    def __eq__(self, other) -> bool:
        return isinstance(other, SymbolicState) and self.values == other.values

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "SymbolicState") -> bool:
        return self.key() < other.key()

    def __getitem__(self, key: FluentKey):
        return self.values[self._domain.index[key]]

    def as_dict(self) -> dict:
        return dict(zip(self._domain.fluent_keys, self.values))

    def holds(self, atoms: Mapping) -> bool:
        return all(self[k] == v for k, v in atoms.items())

    def atoms(self) -> list[str]:
        return [self._domain.format_assignment(k, v) for k, v in zip(self._domain.fluent_keys, self.values)]

    def key(self) -> str:
        return "{" + ",".join(self.atoms()) + "}"

    def __repr__(self) -> str:
        return f"SymbolicState({self.key()})"


@dataclass(frozen=True)
class SymbolicTransition:
    source: SymbolicState
    action: GroundAction
    target: SymbolicState


class GroundDomain:
    """All ground fluents, actions and law instances of a description."""

    def __init__(self, desc: ActionDescription, max_instances: int = 1_000_000):
        self.desc = desc
        self.max_instances = max_instances
        self.domains = {s.name: tuple(s.elements) for s in desc.sorts}
        self.fluent_keys: list[FluentKey] = []
        self.value_domains: list[tuple] = []
        for f in desc.fluents:
            vals = (False, True) if f.value_sort is None else self.domains[f.value_sort]
            for args in itertools.product(*(self.domains[s] for s in f.arg_sorts)):
                self.fluent_keys.append((f.name, *args))
                self.value_domains.append(vals)
        self.index = {k: i for i, k in enumerate(self.fluent_keys)}
        self.actions: list[GroundAction] = [
            (a.name, *args)
            for a in desc.actions
            for args in itertools.product(*(self.domains[s] for s in a.arg_sorts))
        ]
        self.action_index = {a: i for i, a in enumerate(self.actions)}
        self._shorthand = {f.name for f in desc.fluents if not f.arg_sorts and f.value_sort and self.desc.sort(f.value_sort).components}
        self._boolean = {f.name for f in desc.fluents if f.value_sort is None}

        self.ground_laws: list[GroundLaw] = []
        self.inertial: set[int] = set()
        self.defaults: dict[int, object] = {}
        for law in desc.laws:
            if law.kind is LawKind.INERTIAL:
                for i, k in enumerate(self.fluent_keys):
                    if k[0] == law.fluent:
                        self.inertial.add(i)
                        self.ground_laws.append(GroundLaw(LawKind.INERTIAL, (i, None), ()))
                continue
            for g in self._instantiate(law):
                self.ground_laws.append(g)
                if g.kind is LawKind.DEFAULT:
                    self.defaults[g.head[0]] = g.head[1]
                if len(self.ground_laws) > max_instances:
                    raise GroundingError(
                        f"ground instance count exceeds cap {max_instances} "
                        f"({len(self.fluent_keys)} fluents, {len(self.actions)} actions)"
                    )

        self.static_laws = [g for g in self.ground_laws if g.kind is LawKind.STATIC]
        self._dynamic = _index_by_trigger(g for g in self.ground_laws if g.kind is LawKind.DYNAMIC)
        self._nonexec = _index_by_trigger(g for g in self.ground_laws if g.kind is LawKind.NONEXECUTABLE)
        self._successors: dict = {}

    # -- instantiation

    def _var_sorts(self, law) -> dict[str, str]:
        sorts: dict[str, str] = {}

        def note(term, sort):
            if isinstance(term, Var) and term.offset == 0:
                sorts.setdefault(term.name, sort)

        atoms = list(law.body) + ([law.head] if law.head is not None else [])
        for atom in atoms:
            decl = self.desc.fluent(atom.fluent)
            for t, s in zip(atom.args, decl.arg_sorts):
                note(t, s)
            if decl.value_sort is not None:
                comps = self.desc.sort(decl.value_sort).components
                if isinstance(atom.value, tuple):
                    for t, s in zip(atom.value, comps):
                        note(t, s)
                else:
                    note(atom.value, decl.value_sort)
        if law.action is not None:
            decl = self.desc.action(law.action.name)
            for t, s in zip(law.action.args, decl.arg_sorts):
                note(t, s)
        return sorts

    def _instantiate(self, law) -> Iterable[GroundLaw]:
        var_sorts = self._var_sorts(law)
        names = sorted(var_sorts)
        for combo in itertools.product(*(self.domains[var_sorts[n]] for n in names)):
            binding = dict(zip(names, combo))
            try:
                head = self._ground_atom(law.head, binding) if law.head is not None else None
                body = tuple(self._ground_atom(a, binding) for a in law.body)
                action = None
                if law.action is not None:
                    action = (law.action.name, *(_eval(t, binding) for t in law.action.args))
                    if action not in self.action_index:
                        continue
            except _OutOfSort:
                continue
            yield GroundLaw(law.kind, head, body, action)

    def _ground_atom(self, atom: Atom, binding) -> tuple:
        key = (atom.fluent, *(_eval(t, binding) for t in atom.args))
        i = self.index.get(key)
        if i is None:
            raise _OutOfSort
        if isinstance(atom.value, bool):
            value = atom.value
        elif isinstance(atom.value, tuple):
            value = tuple(_eval(t, binding) for t in atom.value)
        else:
            value = _eval(atom.value, binding)
        if value not in self.value_domains[i]:
            raise _OutOfSort
        return (i, value)

    # -- states

    def format_assignment(self, key: FluentKey, value) -> str:
        name = key[0]
        if name in self._boolean:
            return fmt_key(key) if value else "~" + fmt_key(key)
        if name in self._shorthand:
            return f"{name}({','.join(map(str, value))})"
        if isinstance(value, tuple):
            return f"{fmt_key(key)}=({','.join(map(str, value))})"
        return f"{fmt_key(key)}={value}"

    def atoms_to_assignment(self, atoms: Iterable[Atom]) -> dict:
        out = {}
        for atom in atoms:
            i, value = self._ground_atom(atom, {})
            key = self.fluent_keys[i]
            if key in out and out[key] != value:
                raise ContradictionError(f"inconsistent partial state: {fmt_key(key)}")
            out[key] = value
        return out

    def parse_assignment(self, text: str) -> dict:
        """Parse ``pos(9,8),~dooropen`` (braces optional) into a key -> value map."""
        text = text.strip()
        if text.startswith("{") and text.endswith("}"):
            text = text[1:-1]
        try:
            return self.atoms_to_assignment(parse_atoms(self.desc, text))
        except _OutOfSort:
            raise GroundingError(f"atom out of declared sorts in {text!r}") from None

    def parse_action(self, text: str) -> GroundAction:
        term = parse_action_term(self.desc, text)
        action = (term.name, *(_eval(t, {}) for t in term.args))
        if action not in self.action_index:
            raise GroundingError(f"unknown ground action {text!r}")
        return action

    def state_from_key(self, text: str) -> SymbolicState:
        assignment = self.parse_assignment(text)
        missing = [k for k in self.fluent_keys if k not in assignment]
        if missing:
            raise IncompleteStateError(missing)
        return self.make_state(assignment)

    def make_state(self, assignment: Mapping) -> SymbolicState:
        return SymbolicState(tuple(assignment[k] for k in self.fluent_keys), self)

    def _close(self, values: list, hard: list[bool]) -> None:
        """Apply static laws to a fixpoint; overrides soft values, never hard ones."""
        derived: dict[int, object] = {}
        for _ in range(len(values) + 2):
            changed = False
            for law in self.static_laws:
                if all(values[i] == v for i, v in law.body):
                    i, v = law.head
                    if values[i] == v:
                        derived.setdefault(i, v)
                        continue
                    if hard[i] or (i in derived and derived[i] != v):
                        raise ContradictionError(
                            f"static law forcing {self.format_assignment(self.fluent_keys[i], v)} "
                            f"contradicts {self.format_assignment(self.fluent_keys[i], values[i])}"
                        )
                    values[i] = v
                    derived[i] = v
                    changed = True
            if not changed:
                return
        raise ContradictionError("static laws do not reach a fixpoint")

    def is_closed(self, state: SymbolicState) -> bool:
        return not any(
            all(state.values[i] == v for i, v in law.body) and state.values[law.head[0]] != law.head[1]
            for law in self.static_laws
        )

    def executable(self, state: SymbolicState, action: GroundAction) -> bool:
        return not any(_body_holds(law.body, state.values) for law in _candidates(self._nonexec, action, state.values))

    def successor(self, state: SymbolicState, action: GroundAction) -> SymbolicState | None:
        """Next state after ``action``, or None when a nonexecutable law applies."""
        cache_key = (state.values, action)
        if cache_key in self._successors:
            return self._successors[cache_key]
        result = self._successor(state, action)
        self._successors[cache_key] = result
        return result

    def _successor(self, state: SymbolicState, action: GroundAction) -> SymbolicState | None:
        if action not in self.action_index:
            raise GroundingError(f"unknown action {fmt_action(action)}")
        old = state.values
        if not self.executable(state, action):
            return None
        n = len(old)
        values: list = [_UNSET] * n
        hard = [False] * n
        for law in _candidates(self._dynamic, action, old):
            if not _body_holds(law.body, old):
                continue
            i, v = law.head
            if hard[i] and values[i] != v:
                raise TransitionConflict(
                    f"{fmt_action(action)} gives {fmt_key(self.fluent_keys[i])} two values: {values[i]!r}, {v!r}"
                )
            values[i] = v
            hard[i] = True
        for i in range(n):
            if hard[i]:
                continue
            if i in self.inertial:
                values[i] = old[i]
            elif i in self.defaults:
                values[i] = self.defaults[i]
        self._close(values, hard)
        missing = [self.fluent_keys[i] for i in range(n) if values[i] is _UNSET]
        if missing:
            raise IncompleteStateError(missing)
        return SymbolicState(tuple(values), self)

    def executable_actions(self, state: SymbolicState) -> list[GroundAction]:
        return [a for a in self.actions if self.successor(state, a) is not None]


class _OutOfSort(Exception):
    pass


class _Unset:
    def __repr__(self) -> str:
        return "<unset>"


_UNSET = _Unset()


def _eval(term, binding):
    if isinstance(term, Const):
        return term.value
    if term.name not in binding:
        raise GroundingError(f"unbound variable {term.name}")
    value = binding[term.name]
    if term.offset:
        if not isinstance(value, int):
            raise _OutOfSort
        return value + term.offset
    return value


def _body_holds(body, values) -> bool:
    for i, v in body:
        if values[i] != v:
            return False
    return True


def _index_by_trigger(laws) -> dict:
    """action -> (laws with empty body, {fluent index: {value: [laws]}})."""
    index: dict = {}
    for law in laws:
        free, by_first = index.setdefault(law.action, ([], {}))
        if not law.body:
            free.append(law)
        else:
            i, v = law.body[0]
            by_first.setdefault(i, {}).setdefault(v, []).append(law)
    return index


def _candidates(index, action, values) -> list:
    entry = index.get(action)
    if entry is None:
        return []
    free, by_first = entry
    out = list(free)
    for i, by_value in by_first.items():
        out.extend(by_value.get(values[i], ()))
    return out


def ground(desc: ActionDescription, max_instances: int = 1_000_000) -> GroundDomain:
    problems = validate(desc)
    if problems:
        raise GroundingError("invalid action description:\n" + "\n".join(map(str, problems)))
    return GroundDomain(desc, max_instances=max_instances)


def initial_state(grounded: GroundDomain, partial: Union[Mapping, str, Iterable[Atom]]) -> SymbolicState:
    """Complete a partial assignment with defaults, then close under static laws."""
    if isinstance(partial, str):
        partial = grounded.parse_assignment(partial)
    elif not isinstance(partial, Mapping):
        partial = grounded.atoms_to_assignment(partial)
    n = len(grounded.fluent_keys)
    values: list = [_UNSET] * n
    hard = [False] * n
    for key, v in partial.items():
        i = grounded.index[key]
        if v not in grounded.value_domains[i]:
            raise GroundingError(f"value {v!r} out of domain for {fmt_key(key)}")
        values[i], hard[i] = v, True
    for i, v in grounded.defaults.items():
        if values[i] is _UNSET:
            values[i] = v
    grounded._close(values, hard)
    missing = [grounded.fluent_keys[i] for i in range(n) if values[i] is _UNSET]
    if missing:
        raise IncompleteStateError(missing)
    return SymbolicState(tuple(values), grounded)


def successor(grounded: GroundDomain, s: SymbolicState, a: GroundAction) -> SymbolicState | None:
    return grounded.successor(s, a)


@dataclass
class Reachable:
    states: list
    transitions: list = field(default_factory=list)


def enumerate_reachable(grounded: GroundDomain, init: SymbolicState, max_states: int = 100_000) -> Reachable:
    """Breadth-first fixed point of ``successor`` from ``init``, in action order."""
    seen = {init}
    order = [init]
    transitions = []
    queue = deque([init])
    while queue:
        s = queue.popleft()
        for a in grounded.actions:
            t = grounded.successor(s, a)
            if t is None:
                continue
            transitions.append(SymbolicTransition(s, a, t))
            if t not in seen:
                if len(seen) >= max_states:
                    raise GroundingError(f"reachable state cap {max_states} exceeded")
                seen.add(t)
                order.append(t)
                queue.append(t)
    return Reachable(order, transitions)


def dump_transition_system(reach: Reachable) -> str:
    """Line-oriented debug dump: ``STATE <id> <atoms>`` and ``TRANS <from> <action> <to>``."""
    ids = {s: i for i, s in enumerate(reach.states)}
    lines = [f"STATE {i} {','.join(s.atoms())}" for s, i in ids.items()]
    lines += [f"TRANS {ids[t.source]} {fmt_action(t.action)} {ids[t.target]}" for t in reach.transitions]
    return "\n".join(lines) + "\n"

