"""cipoints: exact point counting and bound verification over finite fields."""

__version__ = "0.1.0"
