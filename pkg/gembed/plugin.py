import inspect
import logging
import os.path
from typing import (
    TYPE_CHECKING,
    Any,
    Callable,
    ClassVar,
    List,
    Optional,
    Tuple,
    TypeVar,
)

import numpy as np

from . import util
from .error import ConfigError
from .group import FiniteGroup, GSpaceLabels, build_group
from .pipeline import PipelineConfig

Item = TypeVar("Item")

if TYPE_CHECKING:
    from .command import Context
    from .core import Engine


class Plugin:
    # Class variables
    name: ClassVar[str] = "Unnamed"
    disabled: ClassVar[bool] = False

    # Instance variables
    engine: "Engine"
    log: logging.Logger

    def __init__(self, engine: "Engine") -> None:
        self.engine = engine
        self.log = logging.getLogger(type(self).name.lower().replace(" ", "_"))

    def __repr__(self) -> str:
        cls = type(self)
        source = os.path.relpath(inspect.getfile(cls))
        return f"<plugin '{cls.name}' ({cls.__name__}) from '{source}'>"

    # Shared argument handling
    async def config(self, ctx: "Context", **flags: Any) -> PipelineConfig:
        """Pipeline config from settings, ``--config`` and the command's own flags."""

        group = ctx.option("group")
        return PipelineConfig.from_sources(
            self.engine.settings,
            await self.engine.file_config(ctx),
            group=await util.config.load_json_arg(group) if group else None,
            omega=ctx.option("omega"),
            seed=ctx.option("seed"),
            epsilon=ctx.option("epsilon"),
            beta=ctx.option("beta"),
            **flags,
        )

    async def group(self, ctx: "Context",
                    **flags: Any) -> Tuple[FiniteGroup, GSpaceLabels, PipelineConfig]:
        config = await self.config(ctx, **flags)
        group, labels = self.build(config)
        return group, labels, config

    def build(self, config: PipelineConfig) -> Tuple[FiniteGroup, GSpaceLabels]:
        group, labels = build_group(config.group_spec, config.caps)
        self.log.info("Built group of order %d on %d points", group.order, group.n)
        return group, labels

    async def points(self, ctx: "Context",
                     width: Optional[int] = None) -> np.ndarray:
        path = ctx.option("vectors")
        data = await util.vectors.read_vectors(path, width)
        self.log.debug("Read %d vectors from '%s'", len(data), path)
        return data

    def list_option(self, ctx: "Context", name: str,
                    kind: Callable[[str], Item]) -> List[Item]:
        """Comma-separated option value, e.g. ``--stack 1,2``."""

        text = ctx.option(name)
        try:
            values = [kind(part) for part in text.split(",") if part.strip()]
        except ValueError:
            raise ConfigError(
                f"--{name} expects a comma-separated list, got {text!r}") from None
        if not values:
            raise ConfigError(f"--{name} must not be empty")

        return values
