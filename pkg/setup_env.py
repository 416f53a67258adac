"""
Helper script to create a .env file with qwalk settings.
Every value is optional; press Enter to keep the built-in default.
"""
import os

PROMPTS = [
    ("QWALK_ENVIRONMENT", "Environment (development/production)", "development"),
    ("QWALK_HOST", "API host", "0.0.0.0"),
    ("QWALK_PORT", "API port", "8000"),
    ("QWALK_DEFAULT_STEPS", "Default number of steps t", "15"),
    ("QWALK_DEFAULT_NUM_K", "Default momentum grid size", "1024"),
    ("QWALK_ALPHA_COUNT", "Default alpha grid size for sweeps", "201"),
    ("QWALK_SWEEP_MAX_WORKERS", "Worker threads per sweep", "4"),
    ("QWALK_API_MAX_SWEEP_ROWS", "Row limit for API sweeps", "5000"),
    ("QWALK_API_MAX_STEPS", "Largest t accepted by the API", "500"),
]


def create_env_file():
    """Create .env file from user input."""
    print("qwalk setup")
    print("=" * 50)
    print("\nPress Enter to accept the default shown in brackets.\n")

    env_vars = {}
    for key, label, default in PROMPTS:
        value = input(f"{label} [{default}]: ").strip()
        if value and value != default:
            env_vars[key] = value

    with open(".env", "w") as f:
        f.write("\n".join(f"{key}={value}" for key, value in env_vars.items()) + "\n")

    print(f"\n✓ .env file created with {len(env_vars)} override(s)")
    print("\nNext steps:")
    print("1. Install dependencies: pip install -e .[test]")
    print("2. Run a sweep: qwalk --command sweep --beta 0.25 --t 15")
    print("3. Start the API: python run.py")


if __name__ == "__main__":
    if os.path.exists(".env"):
        response = input(".env file already exists. Overwrite? (y/N): ").strip().lower()
        if response != "y":
            print("Cancelled.")
            exit(0)

    create_env_file()
