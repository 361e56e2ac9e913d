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

"""Diminishing step sizes `zeta^k = zeta0 / (k + 1)^p`"""


class InvalidScheduleError(Exception):
    pass


class StepSchedule(object):
    """Step size sequence shared by both networked algorithms

    With `zeta0 > 0` and `p` in `(1/2, 1]` the sequence is positive, not summable and
    square summable.
    """

    def __init__(self, zeta0=1.0, exponent=1.0):
        if not zeta0 > 0:
            raise InvalidScheduleError("zeta0 must be positive, got %r" % (zeta0,))
        if not 0.5 < exponent <= 1.0:
            raise InvalidScheduleError("exponent must lie in (1/2, 1], got %r" % (exponent,))
        self.__zeta0 = float(zeta0)
        self.__exponent = float(exponent)

    def get_zeta0(self):
        """:rtype: float"""
        return self.__zeta0

    def get_exponent(self):
        """:rtype: float"""
        return self.__exponent

    def step(self, k):
        """Returns the step size of round `k` (rounds count from zero)
        :type k: int
        :rtype: float
        """
        return self.__zeta0 / (k + 1.0) ** self.__exponent

    def cumulative(self, k):
        """Returns the sum of the step sizes of rounds `0..k`
        :type k: int
        :rtype: float
        """
        total = 0.0
        for t in range(k + 1):
            total += self.step(t)
        return total

    def __eq__(self, other):
        return (isinstance(other, StepSchedule)
                and self.__zeta0 == other.get_zeta0()
                and self.__exponent == other.get_exponent())

    def __repr__(self):
        return "StepSchedule(zeta0=%r, exponent=%r)" % (self.__zeta0, self.__exponent)
