from canonicalwebteam.curveasym.parsers.config import (  # noqa
    ConfigParser,  # noqa
    RunConfig,  # noqa
    read_config,  # noqa
)
from canonicalwebteam.curveasym.parsers.expression import (  # noqa
    Expr,  # noqa
    ExpressionParser,  # noqa
    eval_expr,  # noqa
    parse,  # noqa
)
