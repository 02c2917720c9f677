"""Exception hierarchy shared by every pipeline stage."""


class QuizsmithError(Exception):
    """Base class for all errors raised by this package."""


class InputFormatError(QuizsmithError, ValueError):
    """An input file could not be parsed or violates its documented schema."""


class OntologyError(InputFormatError):
    pass


class GlossaryError(InputFormatError):
    pass


class CorpusFormatError(InputFormatError):
    pass


class UnknownConceptError(QuizsmithError, LookupError):
    def __init__(self, concept: str, where: str = ""):
        self.concept = concept
        msg = f"unknown concept {concept!r}"
        super().__init__(f"{msg} ({where})" if where else msg)


class ProvenanceError(QuizsmithError):
    """Candidates or pools were produced from a different corpus."""


class InsufficientDistractorsError(QuizsmithError, ValueError):
    """Fewer than three compatible terms exist for a gap."""


class GenerationError(QuizsmithError):
    pass
