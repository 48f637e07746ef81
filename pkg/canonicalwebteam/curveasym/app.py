# Standard library
import threading
from collections import OrderedDict

# Packages
import flask

# Local
from canonicalwebteam.curveasym.asymptote import (
    closed_form_ratio,
    make_sequence,
)
from canonicalwebteam.curveasym.catalog import CATALOG, build, catalog_list
from canonicalwebteam.curveasym.exceptions import InputError, NumericalError
from canonicalwebteam.curveasym.reports import (
    curve_run,
    meanvalue_run,
    run_acceptance,
    verify_report,
)


class CurveReports:
    """
    Serve catalog traces as CSV, their verdict records as JSON and the
    acceptance report as text.

    The last `cache_size` runs are kept, least recently used first out.
    """

    def __init__(
        self,
        url_prefix="/curveasym",
        blueprint_name="curveasym",
        workers=1,
        cache_size=16,
    ):
        self.blueprint = flask.Blueprint(blueprint_name, __name__)
        self.url_prefix = url_prefix
        self.workers = workers
        self.cache_size = cache_size
        self.warnings = []
        self.runs = OrderedDict()
        self.lock = threading.Lock()

        @self.blueprint.route("/")
        def index():
            """
            List the catalog entries
            """

            return flask.jsonify(catalog_list())

        @self.blueprint.route("/<name>.csv")
        def trace_view(name):
            """
            The trace of a catalog entry, as the CLI writes it
            """

            text, _ = self._run(name)

            response = flask.make_response(text)
            response.headers["Content-Type"] = "text/csv; charset=utf-8"
            self._set_warnings(response)

            return response

        @self.blueprint.route("/<name>/summary.json")
        def summary_view(name):
            _, record = self._run(name)

            response = flask.jsonify(record)
            self._set_warnings(response)

            return response

        @self.blueprint.route("/verify.txt")
        def verify_view():
            """
            Run the acceptance checks; this takes a while
            """

            return (
                verify_report(run_acceptance()),
                {"Content-Type": "text/plain; charset=utf-8"},
            )

        @self.blueprint.errorhandler(InputError)
        def input_error(error):
            return str(error), 400, {"Content-Type": "text/plain"}

        @self.blueprint.errorhandler(NumericalError)
        def numerical_error(error):
            flask.current_app.logger.error(str(error))
            return str(error), 500, {"Content-Type": "text/plain"}

    def init_app(self, app):
        """
        Attach the reports blueprint to the application
        at the specified `url_prefix`
        """

        app.register_blueprint(self.blueprint, url_prefix=self.url_prefix)

    def _parameter(self, entry):
        if not entry.parameter:
            return None

        text = flask.request.args.get(entry.parameter)

        if text is None:
            return None

        try:
            return float(text)
        except ValueError:
            flask.abort(400, f"{entry.parameter} must be a number")

    def _run(self, name):
        """
        Compute (csv text, summary record) for a catalog entry once per
        parameter value
        """

        entry = CATALOG.get(name)

        if entry is None:
            flask.abort(404)

        value = self._parameter(entry)
        key = (name, value)

        with self.lock:
            if key in self.runs:
                self.runs.move_to_end(key)
                return self.runs[key]

        # Computed outside the lock; a concurrent duplicate just repeats
        subject, spec, value = build(name, value)
        seq = make_sequence(spec)
        closed_form = None

        if entry.closed_form:
            closed_form = closed_form_ratio(entry.closed_form, value)

        if entry.group == "curve":
            run = curve_run(
                subject, seq, workers=self.workers, closed_form=closed_form
            )
        else:
            run = meanvalue_run(subject, seq, closed_form=closed_form)

        with self.lock:
            self.warnings.extend(run[1]["failures"])
            self.runs[key] = run

            while len(self.runs) > self.cache_size:
                self.runs.popitem(last=False)

        return run

    def _set_warnings(self, response):
        """
        Append run warnings to the response headers

        :param response: A flask response object
        """

        # To not make the response too big
        # we show only the last ten warnings
        with self.lock:
            warnings = self.warnings[-10:]
            self.warnings = []

        for message in warnings:
            flask.current_app.logger.warning(message)
            response.headers.add("curveasym-warning", message)
