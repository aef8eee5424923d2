from .cp import CpFilter, cp_element, khatri_rao, kron_factors, vectorize_cp
from .dense import (
    ComplexArray,
    ComplexTensor,
    contraction_products,
    leading_vectors,
    mode_contract,
    reshape_vector_to_tensor,
    unfold,
    vectorize_tensor,
)

__all__ = [
    "ComplexArray",
    "ComplexTensor",
    "CpFilter",
    "contraction_products",
    "cp_element",
    "khatri_rao",
    "kron_factors",
    "leading_vectors",
    "mode_contract",
    "reshape_vector_to_tensor",
    "unfold",
    "vectorize_cp",
    "vectorize_tensor",
]
