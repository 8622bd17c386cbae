from typing import TYPE_CHECKING, Any

EngineMixinBase: Any
if TYPE_CHECKING:
    from .engine import Engine

    EngineMixinBase = Engine
else:
    import abc

    EngineMixinBase = abc.ABC
