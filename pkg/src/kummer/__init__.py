"""Finitely generated abelian groups, pure exact sequences, and their splittings."""

from .errors import (
    EvidenceError,
    GlueError,
    InputError,
    KummerError,
    NotExactError,
    PurityError,
    TowerInvalidError,
    UnsupportedError,
)
from .matrices import (
    IntMatrix,
    MatrixEquationSystem,
    SmithDecomposition,
    hermite_column_form,
    kernel_lattice,
    smith_normal_form,
    solve_integer_system,
)
from .groups import (
    INFINITE,
    FgAbGroup,
    GroupElement,
    Homomorphism,
    cokernel,
    direct_sum,
    element_order,
    group_from_relations,
    hom_from_images,
    image,
    invert_isomorphism,
    kernel,
    multiplication_hom,
    primary_component,
    subgroup_generated,
)
from .sequences import (
    PrueferDecomposition,
    PurityCertificate,
    Section,
    ShortExactSequence,
    check_exact,
    character_pairing,
    double_dual_inverse,
    double_dual_iso,
    dualize_sequence,
    is_pure,
    pontryagin_dual,
    pruefer_decompose,
    pure_witness,
    rank_m,
    retraction_from_section,
    section_exists,
    section_from_purity,
    section_from_retraction,
    split_sequence,
)
from .towers import (
    CoKummerTower,
    CrtGlue,
    KummerTower,
    LevelMaps,
    SigmaModel,
    TowerReport,
    crt_split,
    dual_of_tower,
    dual_tower,
    dual_tower_split,
    sigma_kummer_tower,
    tower_purity,
    tower_split,
    validate_co_tower,
    validate_tower,
)
from .colimits import (
    CaseOneEvidence,
    CaseTwoEvidence,
    ColimitElement,
    ColimitTower,
    HeightProbe,
    LimitSplitResult,
    NoSectionCertificate,
    colimit_height,
    colimit_order,
    counterexample_tower,
    direct_limit_split,
    divisible_tower,
    level_sections,
    limit_no_section_certificate,
    limit_purity_witness,
    section_compatibility_solvable,
    stabilizing_tower,
)
from .cohomology import (
    ChrisReport,
    CyclicGroupModule,
    GModuleMap,
    GModuleSequence,
    Subquotient,
    TateGroups,
    chris_verify,
    equivariant_section_exists,
    is_cohomologically_trivial,
    les_multiplication_by_p,
    norm_hom,
    reduce_mod_p,
    regular_extension_fixture,
    regular_module,
    tate_cohomology,
    tate_model,
)

__version__ = "0.1.0"
