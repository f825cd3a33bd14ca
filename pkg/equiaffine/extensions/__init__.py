"""
Readers and writers for the files the command line produces, such as the
grid JSON documents, OBJ meshes and CSV tables.
"""
from .gridfile import read_grid, write_grid, grid_to_dict, grid_from_dict
from .objmesh import obj_lines, write_obj
from .csvtable import read_grid_csv, write_grid_csv, write_report_csv
