"""A small deterministic finite automaton and the normal-form acceptor."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence


@dataclass(frozen=True)
class Automaton:
    """Complete DFA.  ``delta[state][symbol]`` gives the next state."""
    states: tuple
    alphabet: tuple
    start: Hashable
    accept: frozenset
    delta: dict

    def __post_init__(self):
        if self.start not in self.states:
            raise ValueError(f"start state {self.start!r} is not a state")
        if not self.accept <= set(self.states):
            raise ValueError("accept states must be states")
        for s in self.states:
            row = self.delta.get(s)
            if row is None:
                raise ValueError(f"no transitions from state {s!r}")
            for a in self.alphabet:
                if row.get(a) not in self.delta:
                    raise ValueError(f"transition ({s!r}, {a!r}) is undefined")

    def run(self, word: Sequence, state=None):
        state = self.start if state is None else state
        for a in word:
            try:
                state = self.delta[state][a]
            except KeyError:
                raise ValueError(f"letter {a!r} is not in the alphabet") from None
        return state

    def accepts(self, word: Sequence) -> bool:
        return self.run(word) in self.accept


START = "s0"
FAIL = "s1"


def word_acceptor(tp) -> Automaton:
    """States are the subspace ids plus ``s0`` and the absorbing ``s1``.

    From state y the machine moves to x when lambda(y) + x is the whole
    space and to ``s1`` otherwise.
    """
    from .geometry import FULL_ID
    N = len(tp.geometry)
    join, lam = tp.geometry.join_table(), tp.lam
    letters = tuple(range(N))
    delta = {START: {x: x for x in letters}, FAIL: {x: FAIL for x in letters}}
    for y in letters:
        delta[y] = {x: (x if join[lam[y]][x] == FULL_ID else FAIL) for x in letters}
    return Automaton(letters + (START, FAIL), letters, START,
                     frozenset(letters) | {START}, delta)
