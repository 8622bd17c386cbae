import inspect
from types import ModuleType
from typing import TYPE_CHECKING, Any, Iterable, List, MutableMapping, Type

from gembed import plugin, plugins
from gembed.error import ExistingPluginError

from .mixin_base import EngineMixinBase

if TYPE_CHECKING:
    from .engine import Engine


def discover_plugins(modules: Iterable[ModuleType]) -> List[Type[plugin.Plugin]]:
    """Enabled plugin classes defined in ``modules``, ordered by plugin name."""

    found: List[Type[plugin.Plugin]] = []
    for module in modules:

        def defined_here(obj: Any, module: ModuleType = module) -> bool:
            return (inspect.isclass(obj) and issubclass(obj, plugin.Plugin)
                    and obj.__module__ == module.__name__)

        found.extend(cls for _, cls in inspect.getmembers(module, defined_here)
                     if not cls.disabled)

    return sorted(found, key=lambda cls: cls.name)


class PluginExtender(EngineMixinBase):
    # Initialized during instantiation
    plugins: MutableMapping[str, plugin.Plugin]

    def __init__(self: "Engine", **kwargs: Any) -> None:
        self.plugins = {}

        # Propagate initialization to other mixins
        super().__init__(**kwargs)

    def load_plugin(self: "Engine", cls: Type[plugin.Plugin]) -> plugin.Plugin:
        if cls.name in self.plugins:
            raise ExistingPluginError(type(self.plugins[cls.name]), cls)

        plug = cls(self)
        self.register_listeners(plug)
        try:
            self.register_commands(plug)
        except Exception:
            self.unregister_listeners(plug)
            raise

        self.plugins[cls.name] = plug
        self.log.debug("Loaded %r", plug)
        return plug

    def unload_plugin(self: "Engine", plug: plugin.Plugin) -> None:
        self.unregister_listeners(plug)
        self.unregister_commands(plug)
        del self.plugins[plug.name]
        self.log.debug("Unloaded %r", plug)

    def load_all_plugins(self: "Engine",
                         modules: Iterable[ModuleType] = plugins.subplugins) -> None:
        """Loads every plugin in ``modules``; on failure none of them stay loaded."""

        try:
            for cls in discover_plugins(modules):
                self.load_plugin(cls)
        except Exception:
            self.unload_all_plugins()
            raise

        self.log.debug("Loaded %d plugins with %d commands", len(self.plugins),
                       len({cmd.name for cmd in self.commands.values()}))

    def unload_all_plugins(self: "Engine") -> None:
        for plug in list(self.plugins.values()):
            self.unload_plugin(plug)
