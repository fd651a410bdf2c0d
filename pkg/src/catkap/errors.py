"""Exception vocabulary shared across the package."""


class CatkapError(Exception):
    """Base class for every error raised by this package."""


class UnknownObject(CatkapError):
    """Object is not registered in the model."""


class NonComposable(CatkapError):
    """Domain/codomain mismatch between the two factors."""


class ForeignMorphism(CatkapError):
    """Morphism is not a valid member of this model."""


class EmptyHom(CatkapError):
    """The requested hom-set contains no morphisms."""


class NoSampler(CatkapError):
    """No sampling rule is defined for the requested hom-set."""


class ShapeMismatch(CatkapError):
    """Matrix dimensions or hom tags do not line up."""


class InvalidParams(CatkapError):
    """Platform parameters fail their validity checks."""


class TermExplosion(CatkapError):
    """A formal sum exceeded the configured term cap."""


class NegativeCoefficient(CatkapError):
    """Negative coefficient in nonnegative (monoid) coefficient mode."""


class DecodeError(CatkapError):
    """A wire payload could not be decoded into a valid morphism."""


class RoleMismatch(CatkapError):
    """Secret or message does not match the party's protocol role."""


class IndexOutOfRange(CatkapError):
    """Party index outside the configured session."""


class MissingContribution(CatkapError):
    """A multi-party session lacks a required message."""


class DeliveryFailure(CatkapError):
    """The broker could not deliver a message."""


class ParamsTooLarge(CatkapError):
    """Search space exceeds the hard ceiling for exhaustive attacks."""


class SearchExhausted(CatkapError):
    """Brute-force search passed its bound without a hit."""


class NotEnumerable(CatkapError):
    """The model does not expose an enumerable secret space."""


class NotFound(CatkapError):
    """An exhaustive scan found no candidate at all (inconsistent input)."""


class DegenerateModelWarning(UserWarning):
    """Legal but cryptographically useless configuration."""
