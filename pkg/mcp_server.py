import json
import logging

from lie_tools.expression import parse_expression
from lie_tools.groupmodel import GroupModel
from lie_tools.mathieu import mathieu_report, origin_in_hull, power_integral_sequence
from lie_tools.measure import GroupSpec, measure_spec
from lie_tools.numeric import expression_integrand, haar_monte_carlo, haar_quadrature
from lie_tools.rootsystem import supported_types
from lie_tools.verification import SUITES, run_suites
from utils.serialization import encode_complex, encode_gaussian, encode_vector
from utils.settings import get_setting, load_settings
from utils.validation import (
    EXPRESSION_GRAMMAR,
    GROUP_GRAMMAR,
    ValidationError,
    parse_spectrum,
    parse_words,
    validate_positive_int,
)

logger = logging.getLogger(__name__)

SCHEMA = load_settings().get("schema", "haar-integrals/1")

INVALID_REQUEST = -32600
INVALID_PARAMS = -32602
METHOD_NOT_FOUND = -32601
INTERNAL_ERROR = -32603


def envelope(payload, success=True):
    return {"schema": SCHEMA, "success": success, **payload}


class MCPServer:
    """JSON-RPC 2.0 server for Haar integration and Mathieu-conjecture tools"""

    def __init__(self):
        self.methods = {
            'haar.measure': self.handle_measure,
            'haar.integrate': self.handle_integrate,
            'haar.reduce': self.handle_reduce,
            'haar.spectrum': self.handle_spectrum,
            'haar.hull': self.handle_hull,
            'haar.mathieu': self.handle_mathieu,
            'haar.power_sequence': self.handle_power_sequence,
            'haar.monte_carlo': self.handle_monte_carlo,
            'haar.quadrature': self.handle_quadrature,
            'haar.verify': self.handle_verify,
            'haar.groups': self.handle_groups,
        }

    def call(self, method, params):
        """Run one method; domain errors propagate as ValidationError"""
        if method not in self.methods:
            raise KeyError(method)
        return self.methods[method](params or {})

    def handle_request(self, data):
        """Handle JSON-RPC 2.0 request"""
        if not isinstance(data, dict):
            return {
                "jsonrpc": "2.0",
                "error": {
                    "code": INVALID_REQUEST,
                    "message": "Invalid Request"
                },
                "id": None
            }

        request_id = data.get('id')
        try:
            method = data.get('method')
            params = data.get('params', {})

            if method not in self.methods:
                return {
                    "jsonrpc": "2.0",
                    "error": {
                        "code": METHOD_NOT_FOUND,
                        "message": "Method not found"
                    },
                    "id": request_id
                }

            result = self.call(method, params)

            return {
                "jsonrpc": "2.0",
                "result": result,
                "id": request_id
            }

        except ValidationError as e:
            logger.warning(f"Invalid params for {data.get('method')}: {e.message}")
            return {
                "jsonrpc": "2.0",
                "error": {
                    "code": INVALID_PARAMS,
                    "message": "Invalid params",
                    "data": e.to_dict()
                },
                "id": request_id
            }

        except Exception as e:
            logger.error(f"MCP request failed: {str(e)}")
            return {
                "jsonrpc": "2.0",
                "error": {
                    "code": INTERNAL_ERROR,
                    "message": "Internal error",
                    "data": str(e)
                },
                "id": request_id
            }

    # parameter helpers

    @staticmethod
    def _group(params):
        if 'group' not in params:
            raise ValidationError("Missing required field: group", field="group")
        return GroupSpec.parse(params['group'])

    @staticmethod
    def _words(params, spec):
        words = params.get('words')
        if words is None:
            return None
        if not isinstance(words, str):
            words = json.dumps(words)
        return parse_words(words, len(spec.simple_factors))

    @staticmethod
    def _expression(params, key='expr'):
        if key not in params:
            raise ValidationError(f"Missing required field: {key}", field=key)
        return parse_expression(params[key])

    def _model(self, params):
        spec = self._group(params)
        return GroupModel(spec, self._words(params, spec))

    # handlers

    def handle_measure(self, params):
        """Handle measure data query"""
        spec = self._group(params)
        measure = measure_spec(spec, self._words(params, spec), params.get('form_scale', 1))
        return envelope(measure.to_json())

    def handle_integrate(self, params):
        """Handle exact Haar integral"""
        model = self._model(params)
        value = model.integrate(self._expression(params))
        return envelope({
            "group": str(model.spec),
            "integral": encode_gaussian(value),
            "approximate": encode_complex(complex(value)),
        })

    def handle_reduce(self, params):
        """Handle square-root-free reduction"""
        model = self._model(params)
        reduced = model.reduce(self._expression(params))
        return envelope({
            "group": str(model.spec),
            "variables": model.measure.variable_names(),
            "reduced": reduced.to_json(model.measure.variable_names()),
        })

    def handle_spectrum(self, params):
        """Handle spectrum query"""
        model = self._model(params)
        reduced = model.reduce(self._expression(params))
        circle_names = model.measure.variable_names()[model.measure.n_x:]
        return envelope({
            "group": str(model.spec),
            "circle_variables": circle_names,
            "spectrum": [encode_vector(m) for m in sorted(reduced.spectrum())],
        })

    def handle_hull(self, params):
        """Handle origin-in-convex-hull decision"""
        spectrum = params.get('spectrum')
        if spectrum is None:
            raise ValidationError("Missing required field: spectrum", field="spectrum")
        points = parse_spectrum(spectrum) if isinstance(spectrum, str) else [tuple(p) for p in spectrum]
        return envelope(origin_in_hull(points).to_json())

    def handle_mathieu(self, params):
        """Handle Mathieu report"""
        spec = self._group(params)
        n_max = params.get('n_max', get_setting("mathieu", "n_max", 20))
        f = self._expression(params, 'f')
        g = parse_expression(params['g']) if params.get('g') else None
        report = mathieu_report(f, g, spec, n_max, self._words(params, spec))
        return envelope(report.to_json())

    def handle_power_sequence(self, params):
        """Handle power-integral sequence"""
        model = self._model(params)
        n_max = validate_positive_int(params.get('n_max', get_setting("mathieu", "n_max", 20)), "n_max")
        reduced = model.reduce(self._expression(params))
        values = power_integral_sequence(reduced, model.measure, n_max)
        return envelope({
            "group": str(model.spec),
            "n_max": n_max,
            "integrals": [encode_gaussian(value) for value in values],
        })

    def handle_monte_carlo(self, params):
        """Handle Monte Carlo estimate"""
        spec = self._group(params)
        expr = self._expression(params)
        result = haar_monte_carlo(
            spec,
            self._words(params, spec),
            expression_integrand(expr),
            samples=params.get('samples'),
            seed=params.get('seed'),
            workers=params.get('workers'),
        )
        return envelope({"group": str(spec), **result.to_json()})

    def handle_quadrature(self, params):
        """Handle product quadrature"""
        spec = self._group(params)
        expr = self._expression(params)
        integrand = expression_integrand(expr)
        budget = params.get('degree')
        value = haar_quadrature(spec, self._words(params, spec), integrand, budget)
        return envelope({
            "group": str(spec),
            "degree_budget": integrand.degree if budget is None else int(budget),
            "expression_degree": integrand.degree,
            "estimate": encode_complex(value),
        })

    def handle_verify(self, params):
        """Handle acceptance suites"""
        suite = params.get('suite', 'all')
        overrides = {k: v for k, v in params.items() if k != 'suite'}
        results = run_suites(suite, **overrides)
        passed = all(result.passed for result in results)
        return envelope({
            "passed": passed,
            "suites": [result.to_json() for result in results],
        })

    def handle_groups(self, params):
        """Handle supported groups query"""
        return envelope({
            "types": supported_types(),
            "group_grammar": GROUP_GRAMMAR,
            "expression_grammar": EXPRESSION_GRAMMAR,
            "coordinate_models": ["SU(n)", "T^k"],
            "suites": list(SUITES) + ["all"],
        })


# Initialize MCP server
mcp_server = MCPServer()
