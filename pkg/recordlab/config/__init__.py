from .config import Config, settings

__all__ = ["Config", "settings"]
