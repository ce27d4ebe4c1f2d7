import subprocess
import sys


def run_tests(include_slow=False):
    """
    Runs tests with detailed logs and coverage reports.
    """
    print("Running tests with pytest...")
    command = [
        "pytest",
        "--cov=shabrauer",
        "--cov-report=xml",
        "--maxfail=5",
        "--dist=loadscope",
        "-n", "auto",
        "-v",
        "--log-cli-level=DEBUG",
    ]
    if not include_slow:
        command += ["-m", "not slow"]
    result = subprocess.run(command)
    if result.returncode == 0:
        print("✅ All tests passed!")
    else:
        print("❌ Some tests failed. Check the logs for details.")
        sys.exit(1)


if __name__ == "__main__":
    run_tests(include_slow="--slow" in sys.argv[1:])
