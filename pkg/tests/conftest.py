import os

from hypothesis import HealthCheck, settings

settings.register_profile('default', max_examples=50, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile('ci', parent=settings.get_profile('default'), derandomize=True)
settings.load_profile(os.environ.get('QPRESHEAF_HYPOTHESIS_PROFILE', 'default'))


def pytest_collection_modifyitems(items):
    """Put the tolerance tests first.

    This way, we implicitly check whether any subsequent test fails because a tolerance override leaked.
    """

    def tolerance_tests_first(item):
        return int('test_config.py' not in item.nodeid)

    items.sort(key=tolerance_tests_first)
