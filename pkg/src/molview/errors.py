"""Exception hierarchy shared across the engine."""


class MolviewError(Exception):
    """Base class for all engine errors."""


class UnknownFormat(MolviewError):
    """Neither the file extension nor the content matched a supported format."""


class ParseError(MolviewError):
    """Malformed input file.

    Carries the offset (line number for text formats, byte offset for binary
    ones) where parsing failed.
    """

    def __init__(self, message, offset=None, unit="line"):
        self.offset = offset
        self.unit = unit
        if offset is not None:
            message = f"{message} ({unit} {offset})"
        super().__init__(message)


class MissingColumn(ParseError):
    """A required mmCIF atom_site column is absent."""


class Unrepresentable(MolviewError):
    """Molecule cannot be written in the requested format."""


class TruncatedFrame(MolviewError):
    """Trajectory ended mid-frame."""


class AtomCountMismatch(MolviewError):
    """Frame atom count differs from the bound molecule."""


class InvalidId(MolviewError):
    """Malformed PDB accession code."""


class NotFound(MolviewError):
    """Remote entry does not exist (HTTP 404)."""


class NetworkError(MolviewError):
    """Download failed (timeout, DNS, connection)."""


class SelectionSyntaxError(MolviewError):
    """Selection expression failed to parse; ``caret`` is the offending position."""

    def __init__(self, message, expr, caret):
        self.expr = expr
        self.caret = caret
        super().__init__(f"{message}\n  {expr}\n  {' ' * caret}^")


class DanglingSelection(MolviewError):
    """Selection refers to a molecule no longer in the scene."""


class DuplicateName(MolviewError):
    """Scene item name already in use."""


class SchemaMismatch(MolviewError):
    """Session file schema version is not supported."""


class MissingSourceFile(MolviewError):
    """Session references a molecule source file that cannot be found."""


class GridTooLarge(MolviewError):
    """SES grid would exceed the voxel budget; raise the spacing."""


class DegenerateAngle(MolviewError):
    """Angle arms too short to define a direction."""


class DegenerateInput(MolviewError):
    """Point sets unsuitable for superposition (collinear or coincident)."""


class NoAlignment(MolviewError):
    """No admissible aligned fragment pair between the chains."""


class ResolutionTooLarge(MolviewError):
    """Snapshot size exceeds the 8K cap and no override was given."""


class OutOfMemory(MolviewError):
    """Render buffers would exceed the memory budget."""


class BindFailed(MolviewError):
    """Service could not bind the requested address."""


class ProtocolError(MolviewError):
    """Malformed wire message."""
