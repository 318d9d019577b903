"""Descriptive proximity, groupoids and proximal algebraic patterns in greyscale images."""
from .errors import (
    EmptyRegion,
    FormatError,
    ImageIOError,
    InvalidValue,
    NoPatterns,
    NotInCarrier,
    ProbeDomainError,
    ProbeSetMismatch,
    ProximityError,
    SpaceMismatch,
    SpecError,
    UndefinedPair,
)
from .feature import (
    DescriptionSet,
    FeatureVector,
    ProbeDescriptor,
    ProbeSet,
    QuantizedValue,
    describe,
    descriptions_of,
    intensity_probe,
    quantize,
    scalar_probe,
)
from .groupoid import (
    FIRST,
    MAX,
    MIN,
    BinaryOp,
    DescriptiveGroupoid,
    PartialGroupoid,
    apply,
    custom_op,
    elements_neighbourly,
    groupoid_on,
    groupoids_neighbourly,
    is_regular_element,
    is_regular_groupoid,
    make_groupoid,
    pseudometric,
)
from .ingest import RasterImage, Tile, TileSpec, image_space, load_image, region_summary, save_pgm, tile
from .pattern import (
    ClassVerdict,
    Pattern,
    SaliencyScore,
    classify,
    generate_pattern,
    patterns_for,
    patterns_neighbourly,
    saliency,
)
from .proximity import (
    AxiomReport,
    DescriptiveSpace,
    Point,
    Region,
    descriptive_closure,
    descriptive_intersection,
    descriptively_near,
    discrete_metric,
    euclidean_metric,
    near,
    partition_metric,
    point_set_distance,
    random_space,
    spatial_closure,
    validate_axioms,
)

__version__ = "0.1.0"
