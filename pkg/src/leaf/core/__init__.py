from leaf.core.settings import LeafSettings, LogLevel, settings

__all__ = ["LeafSettings", "LogLevel", "settings"]
