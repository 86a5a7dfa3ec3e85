"""Benchmark instance database: content hashing, attributes, queries.

The pieces fit together like this: ``hashing`` turns a formula file
into its content hash, ``features`` reads the base formula metrics,
``store`` keeps hash/attribute associations in a single SQLite file,
``query`` parses and executes the query language, ``cli`` and
``server`` expose it all on the command line and over HTTP.
"""

from .errors import (
    CsvFormatError,
    DimacsParseError,
    FileDecodeError,
    GbdError,
    GroupExistsError,
    InvalidValueError,
    MalformedNameError,
    ParseError,
    ReservedNameError,
    StoreError,
    StoreFormatError,
    UnknownGroupError,
)
from .features import BaseFeatures, extract_base_features, features_of_file
from .hashing import gbd_hash, hash_file, is_gbd_hash, md5_hex, normalize
from .store import (
    AttributeGroup,
    BootstrapSummary,
    DedupCluster,
    DedupReport,
    ImportSummary,
    InitSummary,
    InstanceRow,
    Store,
)

__version__ = "0.1.0"

__all__ = [
    "AttributeGroup",
    "BaseFeatures",
    "BootstrapSummary",
    "CsvFormatError",
    "DedupCluster",
    "DedupReport",
    "DimacsParseError",
    "FileDecodeError",
    "GbdError",
    "GroupExistsError",
    "ImportSummary",
    "InitSummary",
    "InstanceRow",
    "InvalidValueError",
    "MalformedNameError",
    "ParseError",
    "ReservedNameError",
    "Store",
    "StoreError",
    "StoreFormatError",
    "UnknownGroupError",
    "extract_base_features",
    "features_of_file",
    "gbd_hash",
    "hash_file",
    "is_gbd_hash",
    "md5_hex",
    "normalize",
    "__version__",
]
