"""Exception types shared across the package.

Geometry errors signal corrupt landmarks and abort a single face, never a
batch. Sidecar errors carry the 1-based line number of the offending record.
"""


class VroccludeError(Exception):
    """Base class for all package errors."""


class DegenerateEyes(VroccludeError):
    """Eye centers are (nearly) coincident; no interocular axis exists."""


class DegenerateFace(VroccludeError):
    """Temporal reference width is (nearly) zero; no mm->px scale exists."""


class SidecarError(VroccludeError):
    """Base for landmark sidecar parse errors; knows its line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class MalformedLine(SidecarError):
    pass


class WrongPointCount(SidecarError):
    pass


class NonFiniteCoordinate(SidecarError):
    pass


class DuplicateImageId(SidecarError):
    pass


class DatasetError(VroccludeError):
    """Base for dataset adapter errors."""


class RowMisalignment(DatasetError):
    pass


class BadPixelString(DatasetError):
    pass


class UnknownLabelCode(DatasetError):
    pass


class MissingImageFile(DatasetError):
    pass
