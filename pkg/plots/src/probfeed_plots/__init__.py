from .render import KINDS, SchemaError, read_artifact, render

__version__ = "0.1.0"

__all__ = ["KINDS", "SchemaError", "read_artifact", "render", "__version__"]
