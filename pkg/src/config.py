from dataclasses import dataclass, replace
import os

ENV_JOBS = "RBLEIBNIZ_JOBS"
ENV_COLUMN_WARNING_LIMIT = "RBLEIBNIZ_COLUMN_WARNING_LIMIT"


class ConfigError(ValueError):
    pass


def _positive_int(name: str, value: str) -> int:
    try:
        parsed = int(value)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {value!r}") from None
    if parsed < 1:
        raise ConfigError(f"{name} must be positive, got {parsed}")
    return parsed


@dataclass(frozen=True)
class Settings:
    jobs: int = 1
    max_degree: int = 3
    column_warning_limit: int = 100_000

    @staticmethod
    def from_env(environ: dict[str, str] | None = None) -> "Settings":
        environ = dict(os.environ) if environ is None else environ
        settings = Settings()
        if (jobs := environ.get(ENV_JOBS)) is not None:
            settings = replace(settings, jobs=_positive_int(ENV_JOBS, jobs))
        if (limit := environ.get(ENV_COLUMN_WARNING_LIMIT)) is not None:
            settings = replace(
                settings, column_warning_limit=_positive_int(ENV_COLUMN_WARNING_LIMIT, limit)
            )
        return settings


DEFAULT_SETTINGS = Settings()
