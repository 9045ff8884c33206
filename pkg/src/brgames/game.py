"""Finite normal-form games with a common strategy count per player.

Payoffs live in a flat ``(n, m**n)`` array: ``payoffs[i, profile_rank(s)]`` is
player ``i``'s payoff at profile ``s``.  Profiles and environments are ranked
in mixed radix ``m`` with the lowest player index as the most significant
digit.  Everything is 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, Sequence

import numpy as np


class GameError(ValueError):
    """Base class for invalid games, profiles and environments."""


class InvalidEnvironmentError(GameError):
    pass


class DegenerateGameError(GameError):
    """Raised when a best response is not unique.

    ``player`` and ``env`` identify the first offending pair.
    """

    def __init__(self, player: int, env: tuple[int, ...]):
        self.player = player
        self.env = tuple(env)
        super().__init__(f"degenerate game: player {player} has a tied best response at environment {self.env}")


def rank_digits(digits: Sequence[int], m: int) -> int:
    r = 0
    for d in digits:
        if not 0 <= d < m:
            raise InvalidEnvironmentError(f"strategy index {d} out of range for m={m}")
        r = r * m + d
    return r


def unrank_digits(rank: int, length: int, m: int) -> tuple[int, ...]:
    if not 0 <= rank < m**length:
        raise InvalidEnvironmentError(f"rank {rank} out of range for {length} digits base {m}")
    out = [0] * length
    for pos in range(length - 1, -1, -1):
        rank, out[pos] = divmod(rank, m)
    return tuple(out)


@dataclass(frozen=True)
class Environment:
    """Strategies of every player except ``player``, in increasing player order."""

    player: int
    others: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "others", tuple(int(s) for s in self.others))

    def profile(self, own: int) -> tuple[int, ...]:
        """Complete the environment with ``own`` as the player's strategy."""
        return self.others[: self.player] + (own,) + self.others[self.player :]

    @classmethod
    def of(cls, profile: Sequence[int], player: int) -> "Environment":
        profile = tuple(profile)
        return cls(player, profile[:player] + profile[player + 1 :])


def env_rank(env: Environment, m: int) -> int:
    return rank_digits(env.others, m)


def env_unrank(player: int, rank: int, n: int, m: int) -> Environment:
    return Environment(player, unrank_digits(rank, n - 1, m))


def profile_rank(profile: Sequence[int], m: int) -> int:
    return rank_digits(profile, m)


def all_profiles(n: int, m: int) -> Iterator[tuple[int, ...]]:
    """Profiles in rank order."""
    return product(range(m), repeat=n)


@dataclass(frozen=True, eq=False)
class Game:
    n: int
    m: int
    payoffs: np.ndarray

    def __post_init__(self):
        if self.n < 2 or self.m < 2:
            raise GameError(f"need n >= 2 and m >= 2, got n={self.n}, m={self.m}")
        arr = np.array(self.payoffs, dtype=float)
        if arr.shape != (self.n, self.m**self.n):
            try:
                arr = arr.reshape(self.n, self.m**self.n)
            except ValueError:
                raise GameError(
                    f"payoffs must have {self.n * self.m**self.n} entries, got {arr.size}"
                ) from None
        if not np.all(np.isfinite(arr)):
            raise GameError("payoffs must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "payoffs", arr)

    @classmethod
    def from_tensor(cls, tensor) -> "Game":
        """Build from an array shaped ``(m, ..., m, n)``, the usual "payoff tuple per cell" layout."""
        t = np.asarray(tensor, dtype=float)
        n = t.shape[-1]
        m = t.shape[0]
        if t.shape != (m,) * n + (n,):
            raise GameError(f"tensor shape {t.shape} is not (m,)*n + (n,)")
        return cls(n, m, np.moveaxis(t, -1, 0).reshape(n, m**n))

    def payoff(self, player: int, profile: Sequence[int]) -> float:
        return float(self.payoffs[player, profile_rank(profile, self.m)])

    def player_tensor(self, player: int) -> np.ndarray:
        """Player's payoffs reshaped to one axis per player."""
        return self.payoffs[player].reshape((self.m,) * self.n)

    def __eq__(self, other):
        if not isinstance(other, Game):
            return NotImplemented
        return self.n == other.n and self.m == other.m and np.array_equal(self.payoffs, other.payoffs)

    __hash__ = None


def _check_env(game: Game, player: int, env: Environment) -> None:
    if not 0 <= player < game.n:
        raise InvalidEnvironmentError(f"player {player} out of range for n={game.n}")
    if len(env.others) != game.n - 1:
        raise InvalidEnvironmentError(f"environment needs {game.n - 1} entries, got {len(env.others)}")
    if any(not 0 <= s < game.m for s in env.others):
        raise InvalidEnvironmentError(f"environment {env.others} has an entry >= m={game.m}")


def best_response(game: Game, player: int, env: Environment, atol: float = 0.0) -> int:
    """The unique payoff-maximising strategy of ``player`` against ``env``.

    Ties are exact equality by default; ``atol > 0`` treats values within
    ``atol`` of the maximum as tied (for hand-written games).
    """
    _check_env(game, player, env)
    values = np.array([game.payoff(player, env.profile(s)) for s in range(game.m)])
    best = int(np.argmax(values))
    if np.count_nonzero(values >= values[best] - atol) > 1:
        raise DegenerateGameError(player, env.others)
    return best


@dataclass(frozen=True, eq=False)
class BestResponseMap:
    """``table[player, env_rank]`` is the best response, shape ``(n, m**(n-1))``."""

    n: int
    m: int
    table: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.table, dtype=np.int64).reshape(self.n, self.m ** (self.n - 1))
        if t.size and (t.min() < 0 or t.max() >= self.m):
            raise GameError("best-response entries must lie in [0, m)")
        t.setflags(write=False)
        object.__setattr__(self, "table", t)

    def __getitem__(self, key: tuple[int, int]) -> int:
        return int(self.table[key])

    def __len__(self):
        return self.table.size

    def respond(self, env: Environment) -> int:
        return int(self.table[env.player, env_rank(env, self.m)])


def best_response_map(game: Game, atol: float = 0.0) -> BestResponseMap:
    n, m = game.n, game.m
    table = np.empty((n, m ** (n - 1)), dtype=np.int64)
    for i in range(n):
        for e in range(m ** (n - 1)):
            table[i, e] = best_response(game, i, env_unrank(i, e, n, m), atol)
    return BestResponseMap(n, m, table)


def fast_best_response_map(game: Game) -> BestResponseMap:
    """Vectorised :func:`best_response_map` with exact tie detection."""
    n, m = game.n, game.m
    table = np.empty((n, m ** (n - 1)), dtype=np.int64)
    for i in range(n):
        u = np.moveaxis(game.player_tensor(i), i, -1).reshape(-1, m)
        top = u.max(axis=1, keepdims=True)
        ties = np.count_nonzero(u == top, axis=1) > 1
        if ties.any():
            e = int(np.flatnonzero(ties)[0])
            raise DegenerateGameError(i, env_unrank(i, e, n, m).others)
        table[i] = u.argmax(axis=1)
    return BestResponseMap(n, m, table)


def is_degenerate(game: Game) -> bool:
    try:
        fast_best_response_map(game)
    except DegenerateGameError:
        return True
    return False


def enumerate_psne(game: Game) -> set[tuple[int, ...]]:
    """All pure Nash equilibria, as 0-based profiles."""
    brm = fast_best_response_map(game)
    return {
        s
        for s in all_profiles(game.n, game.m)
        if all(brm.respond(Environment.of(s, i)) == s[i] for i in range(game.n))
    }


# Small named games used by tests and the CLI examples.

def prisoners_dilemma() -> Game:
    # strategy 0 = cooperate, 1 = defect
    return Game.from_tensor([[[3, 3], [0, 5]], [[5, 0], [1, 1]]])


def matching_pennies() -> Game:
    return Game.from_tensor([[[1, -1], [-1, 1]], [[-1, 1], [1, -1]]])


def pure_coordination() -> Game:
    return Game.from_tensor([[[1, 1], [0, 0]], [[0, 0], [1, 1]]])


def three_player_example() -> Game:
    """3-player, 2-strategy game with a single PSNE at (0, 1, 0) and a 6-cycle.

    Roman labels: player 1 plays I/II, player 2 III/IV, player 3 V/VI.
    """
    cells = {
        (0, 0, 0): (0, 0, 0),
        (0, 0, 1): (0, 0, 1),
        (0, 1, 0): (1, 1, 1),
        (0, 1, 1): (0, 1, 0),
        (1, 0, 0): (1, 0, 1),
        (1, 0, 1): (1, 1, 0),
        (1, 1, 0): (0, 1, 0),
        (1, 1, 1): (1, 0, 1),
    }
    t = np.zeros((2, 2, 2, 3))
    for s, u in cells.items():
        t[s] = u
    return Game.from_tensor(t)
