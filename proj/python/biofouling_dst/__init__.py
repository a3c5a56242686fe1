"""Ship biofouling decision model: scenario queries over the influence diagram."""

import json

from . import _core
from ._core import LockError, coating_cost, fit_salinity, iwc_cost, nis_state_for_count

__all__ = [
    "Model",
    "LockError",
    "coating_cost",
    "fit_salinity",
    "iwc_cost",
    "nis_state_for_count",
]


class Model:
    """A loaded model bundle. Results use the HTTP service's JSON shapes."""

    def __init__(self, model_dir):
        self._m = _core.Model(str(model_dir))

    @property
    def version(self):
        return self._m.version

    def catalog(self):
        return json.loads(self._m.catalog_json())

    def query(self, locks=None, targets=None):
        return json.loads(self._m.query_json(json.dumps(locks or {}), list(targets or [])))

    def compare(self, scenarios):
        return json.loads(self._m.compare_json(json.dumps(list(scenarios))))

    def validate(self):
        return self._m.validate()

    def table(self, node):
        return self._m.table_tsv(node)
