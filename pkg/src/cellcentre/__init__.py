"""Finite Coxeter groups, Kazhdan-Lusztig cells, the asymptotic ring J and
Hom dimensions of the twisted centre of a two-sided cell."""

from .cells import CellPartition, cell_partition, distinguished_involutions
from .centre import (CentreReport, centre_report, dim_hom, dim_hom_matrix, i_eps_class,
                     psi, psi_matrix, trunc_conv_class)
from .coxeter import CoxeterMatrix, GroupTable, build_group, coxeter_matrix, parse_coxeter
from .jring import JElement, JRingTable, build_jring, j_mul, tau
from .kl import KLTable, build_kl_table
from .laurent import LaurentPoly
from .twist import OrdinaryAut, boc0, ordinary_automorphisms, parse_eps

__version__ = "0.1.0"

__all__ = [
    "CoxeterMatrix", "GroupTable", "build_group", "coxeter_matrix", "parse_coxeter",
    "LaurentPoly", "KLTable", "build_kl_table", "CellPartition", "cell_partition",
    "distinguished_involutions", "JElement", "JRingTable", "build_jring", "j_mul", "tau",
    "OrdinaryAut", "boc0", "ordinary_automorphisms", "parse_eps", "CentreReport",
    "centre_report", "dim_hom", "dim_hom_matrix", "psi", "psi_matrix", "i_eps_class",
    "trunc_conv_class",
]
