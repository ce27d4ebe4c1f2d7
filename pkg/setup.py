from setuptools import setup, find_packages

# Read the README file for the long description
with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="shabrauer",
    version="0.1.0",
    author="zkaedi",
    description="Finite group cohomology, Sha^1_omega,alg of two-term complexes and Brauer group reports.",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    include_package_data=True,
    install_requires=[
        "numpy>=1.24.3",
        "pandas>=1.5.3",
        "sympy>=1.12",
        "pydantic>=2.0",
        "python-dotenv>=1.0.0",
    ],
    extras_require={
        "dev": [
            "flake8",
            "black",
            "isort",
            "mypy",
            "pytest>=7.4.0",
            "pytest-cov",
            "pytest-xdist",
            "hypothesis",
            "coverage"
        ],
    },
    entry_points={
        "console_scripts": [
            "shabrauer=shabrauer.cli:main",
        ],
    },
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires='>=3.9',
)
