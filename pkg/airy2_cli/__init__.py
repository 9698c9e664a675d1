import json
import sys
from typing import List, Optional

import argh

from . import commands
from .errors import Airy2Error
from .logging import get_logger

logger = get_logger(__name__)


def main(argv: Optional[List[str]] = None):
    """main entry point for this project"""
    parser = argh.ArghParser(
        prog="airy2-cli",
        description="Airy_2 two-point asymptotics and Fredholm checks",
    )
    parser.add_argument(
        "-v",
        "--verbose",
        help="Verbose logging",
        action="store_const",
        dest="loglevel",
        const="INFO",
        default="WARNING",
    )
    parser.add_argument(
        "-d",
        "--debug",
        help="Print debugging info",
        action="store_const",
        dest="loglevel",
        const="DEBUG",
    )

    parser.add_commands(
        [
            commands.solve,
            commands.tw,
            commands.moments,
            commands.coeffs,
            commands.cov,
            commands.joint,
            commands.verify,
            commands.compare,
        ]
    )
    try:
        parser.dispatch(argv=argv)
    except Airy2Error as err:
        logger.error("%s: %s", type(err).__name__, err)
        record = {"error": type(err).__name__, "message": str(err)}
        print(json.dumps(record), file=sys.stderr)
        sys.exit(1)


if __name__ == "__main__":
    main()
