"""gembed Errors Constructor"""

from typing import TYPE_CHECKING, Sequence, Type

if TYPE_CHECKING:
    from .command import Command
    from .plugin import Plugin

__all__ = [
    "GembedError",
    "GroupError",
    "NotABijection",
    "ClosureCapExceeded",
    "CapExceeded",
    "NotTransitive",
    "IndexOutOfRange",
    "LengthMismatch",
    "UnknownOrbit",
    "TupleSpaceCapExceeded",
    "NonIntegerBurnside",
    "EmbeddingError",
    "DimensionMismatch",
    "EpsilonNotAboveDelta",
    "DegenerateK",
    "InvalidBudget",
    "DimensionOverflow",
    "DuplicatePoints",
    "NotDiscriminable",
    "ZeroDifference",
    "TooFewPoints",
    "DegenerateLadder",
    "SpectralError",
    "ConditionViolated",
    "NegativeMagnitude",
    "FactorizationMismatch",
    "InconsistentBispectrum",
    "InputError",
    "GroupSpecError",
    "MalformedRow",
    "ConfigError",
    "StoreError",
    "GroupHashMismatch",
    "EmptyStore",
    "StoreLocked",
    "CommandInvokeError",
    "PluginLoadError",
    "ExistingCommandError",
    "ExistingPluginError",
]


class GembedError(Exception):
    """Base exception class for gembed.

    Attributes:
        exit_code (:obj:`int`): Process exit code the CLI uses when this error
            aborts a command.
    """

    exit_code: int = 2


class GroupError(GembedError):
    """Base exception class for group construction and orbit errors"""


class NotABijection(GroupError, ValueError):
    """Exception raised when an image array is not a permutation of {0..n-1}."""


class ClosureCapExceeded(GroupError):
    """Exception raised when the generator closure grows past the group cap.

    Attributes:
        cap (:obj:`int`): The configured group cap.
    """

    def __init__(self, cap: int) -> None:
        self.cap = cap
        super().__init__(f"Group closure exceeds the cap of {cap} elements")


class CapExceeded(GroupError):
    """Exception raised when a constructed space would exceed a point or group cap."""


class NotTransitive(GroupError):
    """Exception raised when an operation needs a transitive action.

    Attributes:
        base (:obj:`int`): The base point the orbit was grown from.
        unreachable (:obj:`int`): A point outside the orbit of ``base``.
    """

    def __init__(self, base: int, unreachable: int) -> None:
        self.base = base
        self.unreachable = unreachable
        super().__init__(f"Point {unreachable} is not reachable from base point {base}")


class IndexOutOfRange(GroupError, IndexError):
    """Exception raised when a point or element index is outside the valid range."""


class LengthMismatch(GroupError, ValueError):
    """Exception raised when a vector length does not match the point count."""


class UnknownOrbit(GroupError, KeyError):
    """Exception raised when an orbit id is not part of the orbit set."""


class TupleSpaceCapExceeded(GroupError):
    """Exception raised when n**omega exceeds the tuple cap.

    Attributes:
        size (:obj:`int`): The tuple space size n**omega.
        cap (:obj:`int`): The configured tuple cap.
    """

    def __init__(self, size: int, cap: int) -> None:
        self.size = size
        self.cap = cap
        super().__init__(f"Tuple space of {size} tuples exceeds the cap of {cap}")


class NonIntegerBurnside(GroupError, ArithmeticError):
    """Exception raised when the Burnside sum is not divisible by the group order."""


class EmbeddingError(GembedError):
    """Base exception class for random projection and discriminability errors"""


class DimensionMismatch(EmbeddingError, ValueError):
    """Exception raised when a Gaussian map does not fit the invariant dimension."""


class EpsilonNotAboveDelta(EmbeddingError, ValueError):
    """Exception raised when the distortion epsilon does not exceed delta."""


class DegenerateK(EmbeddingError, ValueError):
    """Exception raised when fewer than two canonical points are budgeted."""


class InvalidBudget(EmbeddingError, ValueError):
    """Exception raised when beta, epsilon or delta are out of range."""


class DimensionOverflow(EmbeddingError, OverflowError):
    """Exception raised when the embedding dimension diverges."""


class DuplicatePoints(EmbeddingError, ValueError):
    """Exception raised when a point set contains identical points.

    Attributes:
        pair (:obj:`tuple`): Indices of the first duplicate pair found.
    """

    def __init__(self, pair: Sequence[int]) -> None:
        self.pair = tuple(pair)
        super().__init__(f"Points {self.pair[0]} and {self.pair[1]} are identical")


class NotDiscriminable(EmbeddingError):
    """Exception raised when two points share an invariant vector.

    Attributes:
        pair (:obj:`tuple`): Indices of the undiscriminated pair.
    """

    def __init__(self, pair: Sequence[int]) -> None:
        self.pair = tuple(pair)
        super().__init__(
            f"Points {self.pair[0]} and {self.pair[1]} share an invariant vector; "
            "no map can separate them"
        )


class ZeroDifference(EmbeddingError, ValueError):
    """Exception raised when a difference tensor is identically zero."""


class TooFewPoints(EmbeddingError, ValueError):
    """Exception raised when a pairwise statistic is asked of fewer than two points."""


class DegenerateLadder(EmbeddingError, ValueError):
    """Exception raised when a box-counting scale ladder is unusable."""


class SpectralError(GembedError):
    """Base exception class for bispectrum errors"""


class ConditionViolated(SpectralError):
    """Exception raised when a Fourier coefficient vanishes and inversion is impossible.

    Attributes:
        frequency (:obj:`int`): The first frequency whose magnitude fell below
            tolerance.
    """

    def __init__(self, frequency: int, magnitude: float, tol: float) -> None:
        self.frequency = frequency
        self.magnitude = magnitude
        self.tol = tol
        super().__init__(
            f"|z({frequency})| = {magnitude:.3e} is not above tolerance {tol:.3e}"
        )


class NegativeMagnitude(SpectralError, ValueError):
    """Exception raised when the bispectrum implies a negative squared magnitude."""


class FactorizationMismatch(SpectralError):
    """Exception raised when the two bispectrum paths disagree."""


class InconsistentBispectrum(SpectralError, ValueError):
    """Exception raised when a table is not the bispectrum of any real signal.

    Attributes:
        residue (:obj:`float`): Largest imaginary part of the recovered signal.
    """

    def __init__(self, residue: float, tol: float) -> None:
        self.residue = residue
        self.tol = tol
        super().__init__(
            f"Recovered signal has imaginary residue {residue:.3e} above {tol:.3e}")


class InputError(GembedError):
    """Base exception class for malformed user input"""


class GroupSpecError(InputError, ValueError):
    """Exception raised when a group spec cannot be parsed."""


class MalformedRow(InputError, ValueError):
    """Exception raised when a vector file row cannot be parsed.

    Attributes:
        path (:obj:`str`): The offending file.
        line (:obj:`int`): 1-based line number.
    """

    def __init__(self, path: str, line: int, reason: str) -> None:
        self.path = path
        self.line = line
        super().__init__(f"{path}:{line}: {reason}")


class ConfigError(InputError, ValueError):
    """Exception raised when the pipeline configuration is invalid."""


class StoreError(GembedError):
    """Base exception class for sketch store errors"""


class GroupHashMismatch(StoreError):
    """Exception raised when a store was built for another group spec or omega."""

    def __init__(self, stored: str, wanted: str) -> None:
        self.stored = stored
        self.wanted = wanted
        super().__init__(
            f"Store group hash {stored[:12]}… does not match {wanted[:12]}…")


class EmptyStore(StoreError):
    """Exception raised when querying a store with no records."""


class StoreLocked(StoreError):
    """Exception raised when the store lock could not be acquired."""


class CommandInvokeError(GembedError):
    """Exception raised when the command being invoked raised an exception."""


class PluginLoadError(GembedError):
    """Base exception class for every Plugin errors"""


class ExistingCommandError(PluginLoadError):
    """Exception that raised when a command registered more then one.

    Attributes:
        old_cmd (:obj:`Command`): The old command that already registered.
        new_cmd (:obj:`Command`): The new command that already registered.
        alias (:obj:`bool`): Wether the command is an alias or not.
    """

    def __init__(self, old_cmd: "Command", new_cmd: "Command",
                 alias: bool = False) -> None:
        al_str = "alias of " if alias else ""
        old_name = type(old_cmd.plugin).__name__
        new_name = type(new_cmd.plugin).__name__
        self.old_cmd = old_cmd
        self.new_cmd = new_cmd
        self.alias = alias
        super().__init__(
            f"Attempt to replace existing command '{old_cmd.name}' (from {old_name}) "
            f"with {al_str}'{new_cmd.name}' (from {new_name})"
        )


class ExistingPluginError(PluginLoadError):
    """Exception that raised when two same Plugin name registered.

    Attributes:
        old_plugin (:obj:`Plugin`): The old plugin that already registered.
        new_plugin (:obj:`Plugin`): The new plugin that already registered.
    """

    def __init__(self, old_plugin: Type["Plugin"], new_plugin: Type["Plugin"]) -> None:
        self.old_plugin = old_plugin
        self.new_plugin = new_plugin
        super().__init__(
            f"Plugin '{old_plugin.name}' ({old_plugin.__name__}) already exists")
