from dataclasses import dataclass, field
from typing import Any, Callable

ListenerFunc = Callable[..., Any]
Decorator = Callable[[ListenerFunc], ListenerFunc]

DEFAULT_PRIORITY = 100


def priority(_prio: int) -> Decorator:
    """Sets priority on the given listener function. Lower values run first."""

    def prio_decorator(func: ListenerFunc) -> ListenerFunc:
        setattr(func, "_listener_priority", _prio)
        return func

    return prio_decorator


def priority_of(func: ListenerFunc) -> int:
    return getattr(func, "_listener_priority", DEFAULT_PRIORITY)


@dataclass(order=True)
class Listener:
    priority: int
    event: str = field(compare=False)
    func: ListenerFunc = field(compare=False, repr=False)
    plugin: Any = field(compare=False, repr=False)
