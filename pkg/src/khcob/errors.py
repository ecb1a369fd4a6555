"""Exception hierarchy.

Every error carries a short machine-readable ``code`` so the CLI can emit
structured diagnostics and pick an exit status.
"""


class KhError(Exception):
    code = "error"
    #: 2 means the caller supplied bad input, 1 means the computation failed.
    exit_status = 1

    def record(self):
        return {"error": self.code, "message": str(self)}


class InputError(KhError):
    code = "input_error"
    exit_status = 2


class MalformedPD(InputError):
    code = "malformed_pd"


class InconsistentOrientation(InputError):
    code = "inconsistent_orientation"


class Unoriented(KhError):
    code = "unoriented"


class LastVertexOnComponent(InputError):
    code = "last_vertex_on_component"


class BadSlot(InputError):
    code = "bad_slot"


class NotPlanar(KhError):
    code = "not_planar"


class AlreadySmoothedOne(KhError):
    code = "already_smoothed_one"


class BadPermutation(InputError):
    code = "bad_permutation"


class NotAComplex(KhError):
    code = "not_a_complex"


class DimensionMismatch(InputError):
    code = "dimension_mismatch"


class GradingMismatch(InputError):
    code = "grading_mismatch"


class DifferentDiagram(InputError):
    code = "different_diagram"


class MoveError(InputError):
    """A move whose locus does not satisfy the move's preconditions."""

    code = "invalid_move"


class LoopHasCrossings(MoveError):
    code = "loop_has_crossings"


class SameEdgeConflict(MoveError):
    code = "same_edge_conflict"


class SameEdge(MoveError):
    code = "same_edge"


class NotAKink(MoveError):
    code = "not_a_kink"


class NotABigon(MoveError):
    code = "not_a_bigon"


class NotATriangle(MoveError):
    code = "not_a_triangle"


class UnsupportedConfiguration(MoveError):
    code = "unsupported_configuration"


class MovieError(KhError):
    """A move failed while a movie was being built or propagated."""

    code = "movie_error"

    def __init__(self, stage, cause):
        super().__init__(f"stage {stage}: {cause}")
        self.stage = stage
        self.cause = cause
        if isinstance(cause, KhError):
            self.exit_status = cause.exit_status

    def record(self):
        rec = {"error": self.code, "stage": self.stage, "message": str(self)}
        if isinstance(self.cause, KhError):
            rec["cause"] = self.cause.code
        return rec


class SimplificationFailed(KhError):
    code = "simplification_failed"

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class NoEmptyEnd(InputError):
    code = "no_empty_end"


class BoundaryMismatch(InputError):
    code = "boundary_mismatch"


class TargetExpressionFailed(KhError):
    code = "target_expression_failed"


class ComputationTooLarge(KhError):
    code = "too_large"
