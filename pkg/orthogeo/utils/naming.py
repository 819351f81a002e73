"""
Adapter class names → importable module paths.

``AdapterEngine`` maps a method key to a class name; the file that
defines the class is the class name in snake_case under the adapter
types package.
"""

import re

from orthogeo.core.exceptions import InvalidInput

ADAPTER_PACKAGE = "orthogeo.services.adapters.types"

# "SVDSpectrum" → "SVD_Spectrum", then "OrthoGeo" → "Ortho_Geo"
_ACRONYM_BOUNDARY = re.compile(r"([A-Z]+)([A-Z][a-z])")
_WORD_BOUNDARY = re.compile(r"([a-z\d])([A-Z])")


def camel_to_snake(name: str) -> str:
    """``OrthoGeoAdapter`` → ``ortho_geo_adapter``; a run of capitals stays one word."""
    return _WORD_BOUNDARY.sub(r"\1_\2", _ACRONYM_BOUNDARY.sub(r"\1_\2", name)).lower()


def adapter_module_path(class_name: str, package: str = ADAPTER_PACKAGE) -> str:
    """Dotted path of the module expected to define *class_name*."""
    if not class_name.isidentifier():
        raise InvalidInput(f"'{class_name}' is not a valid adapter class name")
    return f"{package}.{camel_to_snake(class_name)}"
