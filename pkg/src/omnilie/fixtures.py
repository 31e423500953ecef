"""Named example structures used by the tests, the acceptance suite and the CLI docs."""
from __future__ import annotations

from .algebroid import AlgebroidData, abelian, poisson_cotangent, tangent_algebroid
from .bundle import VectorField
from .dirac import LineForm
from .jacobi import JacobiData
from .poly import Patch, Poly, PolyMatrix
from .tensor import StructureTensor


def so3_tensor(nvars: int, c312=1) -> StructureTensor:
    """``[e1, e2] = c312 e3``, ``[e2, e3] = e1``, ``[e3, e1] = e2``."""
    one, z = Poly.const(1, nvars), Poly.zero(nvars)
    return StructureTensor.from_pairs(3, nvars, {
        (0, 1): (z, z, Poly.const(c312, nvars)),
        (0, 2): (z, -one, z),
        (1, 2): (one, z, z),
    })


def so3_point(c312=1) -> AlgebroidData:
    patch = Patch(0, 3)
    return AlgebroidData(patch, PolyMatrix.zeros(0, 3, 0), so3_tensor(0, c312))


def so3_action(c312=1) -> AlgebroidData:
    """Action algebroid of so(3) rotating R^3: ``rho(e_a) = x cross e_a``."""
    patch = Patch(3, 3)
    x = [Poly.var(i, 3) for i in range(3)]
    z = Poly.zero(3)
    # column a is x cross e_a
    rho = PolyMatrix([[z, -x[2], x[1]],
                      [x[2], z, -x[0]],
                      [-x[1], x[0], z]], 3, 3, 3)
    return AlgebroidData(patch, rho, so3_tensor(3, c312))


def abelian_plane() -> AlgebroidData:
    return abelian(Patch(2, 2))


def tangent_plane() -> AlgebroidData:
    return tangent_algebroid(Patch(2, 2))


def symplectic_bivector(nvars: int = 2) -> PolyMatrix:
    one, z = Poly.const(1, nvars), Poly.zero(nvars)
    return PolyMatrix([[z, one], [-one, z]], 2, 2, nvars)


def symplectic_plane() -> AlgebroidData:
    return poisson_cotangent(Patch(2, 2), symplectic_bivector())


def correspondence_fixtures() -> dict[str, AlgebroidData]:
    return {"abelian": abelian_plane(), "so3-point": so3_point(),
            "so3-action": so3_action(), "tangent": tangent_plane(),
            "symplectic-plane": symplectic_plane()}


def contact_line() -> JacobiData:
    """``n = 1``, ``Lambda = 0``, ``X = d/dt``."""
    patch = Patch(1, 1, ("t",))
    return JacobiData(patch, PolyMatrix.zeros(1, 1, 1), VectorField((Poly.const(1, 1),), 1))


def poisson_plane_jacobi() -> JacobiData:
    patch = Patch(2, 1)
    return JacobiData(patch, symplectic_bivector(), VectorField.zero(2, 2))


def lambda_sharp() -> LineForm:
    """``(xi, t) -> (Lambda#(xi), 0)`` for the symplectic plane."""
    j = poisson_plane_jacobi()
    return LineForm(j.patch, j.lam, j.x_field)
