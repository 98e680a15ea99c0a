from neumann_bessel.cli import main

main()
