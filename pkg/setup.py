from setuptools import setup, find_packages

setup(
    name="gwforge",
    version="1.0.0",
    description="Galton-Watson trees: exact laws, samplers and local limits of conditioned trees.",
    packages=find_packages(),
    python_requires=">=3.8",
    install_requires=[
        "matplotlib",
        "numpy",
        "scipy"
    ],
    entry_points={
        "console_scripts": ["gwforge = gwforge.cli:main"]
    }
)
