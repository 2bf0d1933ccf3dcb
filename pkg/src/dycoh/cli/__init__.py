"""Text format, report serialization and the ``dycoh`` command."""

from .main import build_parser, main, run  # noqa: F401
from .parser import Diagnostic, ParseError, PresentationFile, Span, parse, parse_path, try_parse  # noqa: F401
