"""Test double: always answers with a fixed eligible-edge index.

Usage: python echo_policy.py [index]. Replies to every observation with
{"type": "act", "index": <index>} and exits after episode_end.
"""

import json
import sys


def main() -> None:
    index = int(sys.argv[1]) if len(sys.argv) > 1 else 0
    for line in sys.stdin:
        message = json.loads(line)
        if message["type"] == "observe":
            print(json.dumps({"type": "act", "index": index}), flush=True)
        elif message["type"] == "episode_end":
            return


if __name__ == "__main__":
    main()
