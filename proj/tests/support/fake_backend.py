"""Minimal scripted SMT-LIB responder for exercising error paths.

Modes:
  scratch-unknown  check-sat answers sat at stack depth 0 and unknown inside a push
  hang             check-sat never answers
  error            check-sat answers with an error
"""
import sys
import time

mode = sys.argv[1] if len(sys.argv) > 1 else "scratch-unknown"
depth = 0


def say(text):
    sys.stdout.write(text + "\n")
    sys.stdout.flush()


for line in sys.stdin:
    cmd = line.strip()
    if cmd.startswith("(echo"):
        say("rdinst-ready")
    elif cmd.startswith("(push"):
        depth += 1
    elif cmd.startswith("(pop"):
        depth -= 1
    elif cmd == "(check-sat)":
        if mode == "hang":
            time.sleep(3600)
        elif mode == "error":
            say('(error "scripted failure")')
        else:
            say("sat" if depth == 0 else "unknown")
    elif cmd == "(get-model)":
        say("(\n)")
    elif cmd.startswith("(get-info :reason-unknown"):
        say('(:reason-unknown "scripted")')
    elif cmd == "(exit)":
        break
