import asyncio
import bisect
from typing import TYPE_CHECKING, Any, MutableMapping, MutableSequence

from gembed import plugin, util
from gembed.listener import DEFAULT_PRIORITY, Listener, ListenerFunc, priority_of

from .mixin_base import EngineMixinBase

if TYPE_CHECKING:
    from .engine import Engine


class EventDispatcher(EngineMixinBase):
    # Initialized during instantiation
    listeners: MutableMapping[str, MutableSequence[Listener]]

    def __init__(self: "Engine", **kwargs: Any) -> None:
        # Initialize listener map
        self.listeners = {}

        # Propagate initialization to other mixins
        super().__init__(**kwargs)

    def register_listener(self: "Engine",
                          plug: plugin.Plugin,
                          event: str,
                          func: ListenerFunc,
                          priority: int = DEFAULT_PRIORITY) -> None:
        # Equal priorities keep registration order
        bisect.insort_right(self.listeners.setdefault(event, []),
                            Listener(priority, event, func, plug))

    def unregister_listener(self: "Engine", listener: Listener) -> None:
        # Listeners compare by priority only, so match on identity
        remaining = [
            lst for lst in self.listeners[listener.event] if lst is not listener
        ]
        if remaining:
            self.listeners[listener.event] = remaining
        else:
            del self.listeners[listener.event]

    def register_listeners(self: "Engine", plug: plugin.Plugin) -> None:
        try:
            for event, func in util.misc.find_prefixed_funcs(plug, "on_"):
                self.register_listener(plug, event, func, priority=priority_of(func))
        except Exception:
            self.unregister_listeners(plug)
            raise

    def unregister_listeners(self: "Engine", plug: plugin.Plugin) -> None:
        for lst in list(self.listeners.values()):
            for listener in list(lst):
                if listener.plugin is plug:
                    self.unregister_listener(listener)

    async def dispatch_event(self: "Engine", event: str, *args: Any,
                             **kwargs: Any) -> None:
        """Runs every listener for ``event`` concurrently, started in priority order."""

        listeners = self.listeners.get(event)
        if not listeners:
            return

        tasks = [asyncio.ensure_future(lst.func(*args, **kwargs)) for lst in listeners]

        self.log.debug("Dispatching event '%s' to %d listeners", event, len(tasks))
        await asyncio.gather(*tasks)
