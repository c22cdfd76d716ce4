"""Entry point for running waiterplan as a module: python -m waiterplan"""

from .cli import WaiterPlanCLI

if __name__ == '__main__':
    WaiterPlanCLI.main()
