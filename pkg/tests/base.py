import json
import os
import sys
import unittest

import numpy as np

from qpresheaf import config
from qpresheaf.linop_core import HermitianOperator, Projection
from qpresheaf.order_core import ExtendedReal

try:
    test_iterations = int(os.environ.get('QPRESHEAF_TEST_ITERATIONS', '0'))
except ValueError:
    test_iterations = 0


class TestCase(unittest.TestCase):
    maxDiff = None

    iterations = test_iterations

    data_dir = os.path.join(os.path.dirname(__file__), 'data')

    def setUp(self):
        self.addTypeEqualityFunc(Projection, 'assertOperatorEqual')
        self.addTypeEqualityFunc(HermitianOperator, 'assertOperatorEqual')
        self.addTypeEqualityFunc(ExtendedReal, 'assertExtendedEqual')

    def run(self, result=None):
        # run first time
        super().run(result=result)
        if self.iterations == 0 or result is None:
            return

        before = config.get_tolerances()
        for _ in range(self.iterations):
            super().run(result=result)
            if config.get_tolerances() != before:
                result.buffer = False
                try:
                    raise AssertionError('process-wide tolerances changed by a test')
                except AssertionError:
                    result.addError(self, sys.exc_info())
                return

    def path(self, name):
        """Return full path for resource."""
        return os.path.join(self.data_dir, name)

    def load(self, name):
        """Load resource by name."""
        with open(self.path(name), 'rb') as stream:
            return stream.read()

    def load_json(self, name):
        with open(self.path(name)) as stream:
            return json.load(stream)

    def assertOperatorEqual(self, first, second, msg=None, tol=1e-8):
        """Check that two operators agree in the operator norm."""
        msg = msg or ''
        if first.dim != second.dim:
            self.fail(f'dimensions differ: {first.dim} != {second.dim}. {msg}')
        distance = float(np.linalg.norm(first.matrix - second.matrix, 2))
        if distance > tol:
            self.fail(f'operators differ by {distance:.3g} in norm. {msg}')

    def assertExtendedEqual(self, first, second, msg=None):
        if not first == second:
            self.fail(f'{first} != {second}. {msg or ""}')
