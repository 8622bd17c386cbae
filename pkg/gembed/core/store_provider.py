from typing import TYPE_CHECKING, Any, Mapping, Optional

from gembed import util

from .mixin_base import EngineMixinBase

if TYPE_CHECKING:
    from .engine import Engine


class StoreProvider(EngineMixinBase):
    # Initialized during instantiation
    _environ: Optional[Mapping[str, str]]
    _settings: Optional[util.config.Settings]

    def __init__(self: "Engine",
                 *,
                 environ: Optional[Mapping[str, str]] = None,
                 **kwargs: Any) -> None:
        self._environ = environ
        self._settings = None

        # Propagate initialization to other mixins
        super().__init__(**kwargs)

    @property
    def settings(self: "Engine") -> util.config.Settings:
        """Environment settings, read on first use."""

        if self._settings is None:
            if self._environ is None:
                self._settings = util.config.Settings()
            else:
                self._settings = util.config.Settings(self._environ)

        return self._settings

    def open_store(self: "Engine",
                   path: Optional[str] = None) -> util.store.SketchStore:
        return util.store.SketchStore(path or self.settings["store"])
