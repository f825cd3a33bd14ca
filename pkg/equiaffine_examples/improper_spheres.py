#!/usr/bin/env python3
# With l = 0 the generated surfaces are improper affine spheres, graphs
# of z = xy + Phi(y). This prints Phi for a few choices of f.
import numpy as np

from equiaffine import generate, improper_sphere_phi
from equiaffine.verify import detect_improper_sphere


for f in ('0', '6', 'cos(v)'):
    grid = generate(ell='0', f=f, nu=5, nv=9)
    v, phi = improper_sphere_phi(grid)
    print('f = {}: constant affine normal: {}'.format(
        f, detect_improper_sphere(grid, ell='0')))
    for y, value in zip(v[::2], phi[::2]):
        print('    Phi({:+.2f}) = {:+.6f}'.format(y, value))

# For f = 6 this is the cubic z = xy - 2y^3
v, phi = improper_sphere_phi(generate(ell='0', f='6', nu=3, nv=5))
print('max |Phi + 2v^3| =', np.max(np.abs(phi + 2 * v ** 3)))
