"""RO(C_n)-graded homotopy of Eilenberg-MacLane spectra for cyclic groups.

Brute-force cellular computations (``spheres``) and closed forms
(``closedforms``), with Burnside rings (``burnside``), integer linear algebra
(``exactlin``), representation rings (``ro``) and Mackey functors (``mackey``).
"""

__version__ = "0.1.0"
