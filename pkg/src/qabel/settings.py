from __future__ import annotations

from configparser import ConfigParser
from configparser import Error as ConfigParserError
import os
from pathlib import Path
from typing import final
from typing import TYPE_CHECKING

from qabel.exceptions import ConfigError

if TYPE_CHECKING:
    from typing import Any
    from typing import Optional
    from typing import Tuple

    from qabel.qa_collections import Config

__all__ = ('Settings',)


@final
class Settings:
    """Class introduces the settings of the `qabel` package.

    The values of a section are read with :meth:`get_float`,
    :meth:`get_int`, :meth:`get_complex` and friends.  Each getter
    takes the fallback that applies when the key is missing, so a
    missing or partial ``config.ini`` still yields a working setup.

    :param config_file: The path to an INI file.  Relative paths are
        resolved against the package directory.  ``QABEL_CONFIGFILE``
        is used when empty.
    :param log_file: The log file name, ``QABEL_LOGFILE`` when empty.
    :param log_level: ``INFO`` or ``DEBUG``, ``QABEL_LOGLEVEL`` when
        empty.

    """

    _singleton: Optional[Settings] = None

    def __new__(cls, **kwargs: Any) -> Any:
        """Return one "single" instance of current class.

        :param kwargs: constructor arguments.

        """
        if not cls._singleton:
            cls._singleton = super().__new__(cls)
        return cls._singleton

    def __init__(
        self,
        *,
        config_file: str = '',
        log_file: str = '',
        log_level: str = '',
    ) -> None:
        self.base_dir: Path = Path(__file__).parent.resolve(strict=True)

        config_file = config_file or os.environ.get(
            'QABEL_CONFIGFILE', 'config.ini'
        )
        self.path_to_config_file: Path = self.base_dir / config_file
        self.config_ini: Config = {}
        self.parser: ConfigParser = ConfigParser()
        self.read_config()

        log_file = (
            log_file
            or os.environ.get('QABEL_LOGFILE')
            or self.config_ini['log_file']
        )
        self.path_to_log_file: Path = self.base_dir / log_file

        self.log_level: str = log_level or os.environ.get(
            'QABEL_LOGLEVEL'
        ) or self.config_ini['log_level']

    def read_config(self) -> None:
        """Read the configuration from `config.ini` and set it.

        :raises ConfigError: If the file exists but cannot be parsed.

        """
        if self.path_to_config_file.exists():
            try:
                with open(self.path_to_config_file, encoding='utf-8') as f:
                    self.parser.read_file(f)
            except ConfigParserError as error:
                raise ConfigError(
                    f'Cannot parse {self.path_to_config_file.name}: {error}!'
                ) from error
        log_level: str = self.parser.get(
            'qabel', 'log_level', fallback='INFO'
        ).upper()
        self.config_ini['log_level'] = (
            log_level if log_level == 'DEBUG' else 'INFO'
        )
        self.config_ini['log_file'] = self.parser.get(
            'qabel', 'log_file', fallback='qabel.log'
        )

    def load(self, config_file: str) -> None:
        """Replace the configuration by another INI file.

        :param config_file: The path; relative paths are resolved
            against the package directory.

        :raises ConfigError: If the file does not exist or cannot be
            parsed.

        """
        path = self.base_dir / config_file
        if not path.is_file():
            raise ConfigError(f'The config file {path} does not exist!')
        self.path_to_config_file = path
        self.parser = ConfigParser()
        self.read_config()

    def override(self, section: str, key: str, value: str) -> None:
        """Set one option, as the command line does.

        :param section: The section name; created when missing.
        :param key: The option name.
        :param value: The raw option text.

        """
        if not self.parser.has_section(section):
            self.parser.add_section(section)
        self.parser.set(section, key, value)

    def get_float(self, section: str, key: str, fallback: float) -> float:
        """Return a float option of ``section``.

        :param section: The section name, e.g. ``integrate``.
        :param key: The option name.
        :param fallback: The value used when the option is missing.

        :raises ConfigError: If the option is not a number.

        """
        try:
            return self.parser.getfloat(section, key, fallback=fallback)
        except ValueError as error:
            raise ConfigError(
                f'The option [{section}] {key} must be a number!'
            ) from error

    def get_int(self, section: str, key: str, fallback: int) -> int:
        """Return an integer option of ``section``.

        :param section: The section name.
        :param key: The option name.
        :param fallback: The value used when the option is missing.

        :raises ConfigError: If the option is not an integer.

        """
        try:
            return self.parser.getint(section, key, fallback=fallback)
        except ValueError as error:
            raise ConfigError(
                f'The option [{section}] {key} must be an integer!'
            ) from error

    def get_complex(
        self, section: str, key: str, fallback: complex
    ) -> complex:
        """Return a complex option written like ``0.3+1.1j`` or ``1i``.

        :param section: The section name.
        :param key: The option name.
        :param fallback: The value used when the option is missing.

        """
        raw = self.parser.get(section, key, fallback='')
        return parse_complex(raw, f'[{section}] {key}') if raw else fallback

    def get_complexes(
        self, section: str, key: str, fallback: Tuple[complex, ...]
    ) -> Tuple[complex, ...]:
        """Return a comma separated list of complex numbers.

        :param section: The section name.
        :param key: The option name.
        :param fallback: The value used when the option is missing.

        """
        raw = self.parser.get(section, key, fallback='')
        if not raw.strip():
            return fallback
        return tuple(
            parse_complex(item, f'[{section}] {key}')
            for item in raw.split(',')
        )

    def get_floats(
        self, section: str, key: str, fallback: Tuple[float, ...]
    ) -> Tuple[float, ...]:
        """Return a comma separated list of floats.

        :param section: The section name.
        :param key: The option name.
        :param fallback: The value used when the option is missing.

        :raises ConfigError: If an item is not a number.

        """
        raw = self.parser.get(section, key, fallback='')
        if not raw.strip():
            return fallback
        try:
            return tuple(float(item) for item in raw.split(','))
        except ValueError as error:
            raise ConfigError(
                f'The option [{section}] {key} must list numbers!'
            ) from error


def parse_complex(raw: str, name: str = 'value') -> complex:
    """Parse ``raw`` as a complex number.

    Both ``j`` and ``i`` are accepted as the imaginary unit, so
    ``1i``, ``0.3+1.1i`` and ``0.2+0.3j`` all parse.

    >>> parse_complex('0.2+0.3i')
    (0.2+0.3j)
    >>> parse_complex('1i')
    1j

    :param raw: The text to parse.
    :param name: The option name used in the error message.

    :raises ConfigError: If ``raw`` is not a complex number.

    """
    text = raw.strip().replace(' ', '').replace('i', 'j')
    try:
        return complex(text)
    except ValueError as error:
        raise ConfigError(
            f'The option {name} must be a complex number, got {raw!r}!'
        ) from error
