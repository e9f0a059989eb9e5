"""planar4: large 4-degenerate induced subgraphs of planar graphs.

Collect/delete semantics, exact Gamma/Phi potentials, the full discharging
procedure with its transfer ledger, bad-cut and good-subgraph analysis, a
certified extraction loop, brute-force oracles, and graph generators.
"""

__version__ = "0.1.0"

from .graphs import (
    Graph,
    CollectResult,
    GammaBreakdown,
    collect_closure,
    is_k_degenerate,
    delete_vertex,
    average_degree,
    connected_components,
    gamma,
    gamma_breakdown,
    graph6_bytes,
    graph6_loads,
    read_graph6,
    write_graph6,
)
from .embedding import (
    EmbeddedGraph,
    Face,
    build_embedded,
    consecutive_five_neighbours,
    embed,
    embed_graph,
    faces_from_rotation,
    induced_embedding,
    is_planar,
    nontriangular_face_count,
    planar_code_bytes,
    planar_dual,
    read_planar_code,
    read_planar_code_file,
    write_planar_code,
)
from .errors import (
    CounterexampleFound,
    FormatError,
    GenerationError,
    InternalInvariantError,
    NotPlanarError,
    Planar4Error,
)
from .discharging import (
    ChargeState,
    DistanceDischargeInstance,
    Transfer,
    VertexType,
    charge_report_rows,
    check_lemma_faces,
    classify_types,
    distance_discharge_instances,
    initial_charges,
    lemma12_violations,
    run_discharging,
    step1_face_discharge,
    step2_distance_discharge,
    step3_final_discharge,
)
from .cuts import (
    BadCut,
    GoodSubgraph,
    find_bad_cuts,
    good_subgraph,
    hotspot_vertices,
    kernel_charge,
    lemma9_dichotomy,
)
from .reduction import (
    CollectAll,
    ExtractionCertificate,
    ReductionAudit,
    ReductionStep,
    Witness,
    audit_reduction,
    certificate_from_json,
    certificate_to_json,
    extract,
    extract_with_report,
    find_reduction,
    theorem2_witness,
    verify_certificate,
)
from .oracle import (
    OracleResult,
    compare_extract_to_oracle,
    min_deletion_exact,
    verify_theorem2_exhaustive,
)
from .generators import (
    NAMED_GRAPHS,
    GeneratorSpec,
    StreamRecord,
    all_connected_planar_graphs,
    all_triangulations,
    bipyramid,
    disk_fixture,
    glue_on_triangle,
    ingest_stream,
    layered_fixture,
    named,
    random_triangulation,
    realize,
)
