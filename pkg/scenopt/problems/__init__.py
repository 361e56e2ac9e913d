# -*- coding: utf-8 -*-

# Python Scenario Optimizer
#
# This program is free software; you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation; either version 2 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# Further information about the license: http://www.gnu.org/licenses/gpl-2.0.html

"""
Robust convex problem templates: domains `Theta` with their projections, constraint
families `f(theta, q)` with sub-gradients, and the concrete problems built from them.
"""

__all__ = [
    "domain",
    "epigraph",
    "family",
    "halfspace",
    "identification",
    "problem"
]
