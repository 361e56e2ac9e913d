# -*- coding: utf-8 -*-

# Python Scenario Optimizer
#
# This program is free software; you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation; either version 2 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# Further information about the license: http://www.gnu.org/licenses/gpl-2.0.html

"""
Module containing the `scenopt.parser.Parser` used to read topologies from edge-list text.

The format is a header line `m directed|undirected` followed by one `i j` pair per line,
meaning that node `i` receives from node `j`. Blank lines and lines starting with `#` are
ignored.
"""

import logging
import re as regex

from scenopt.graph import Topology

logger = logging.getLogger(__name__)

DIRECTED = "directed"
UNDIRECTED = "undirected"


class FormatViolationError(Exception):
    pass


class Parser(object):
    """Parses edge-list formatted topologies

    The parsed topology may be accessed via `scenopt.parser.Parser.get_topology()`.
    """

    def __init__(self):
        self.__topology = None

    def get_topology(self):
        """Returns the topology of the last parsed document
        :rtype: Topology
        """
        return self.__topology

    def parse_file(self, file_path, strict=True):
        """Opens and parses a file, from the given file path, as an edge list
        :type file_path: str
        :type strict: bool
        :rtype: Topology
        """
        with open(file_path, 'r', encoding='utf-8-sig') as edge_stream:
            return self.parse(edge_stream, strict)

    def parse(self, edge_stream, strict=True):
        """Parses a stream, or a list of lines, as an edge list
        :type edge_stream: a file stream, or str array of lines
        :type strict: bool
        :rtype: Topology
        """
        header = None
        edges = []

        for line_number, line in enumerate(edge_stream, start=1):
            if isinstance(line, bytes):
                line = line.decode('utf-8-sig')
            stripped = line.strip()
            if not stripped or stripped.startswith('#'):
                continue

            if header is None:
                header = self.__parse_header(line_number, stripped)
                continue

            edge = self.__parse_edge(line_number, stripped, header[0], strict)
            if edge is not None:
                edges.append(edge)

        if header is None:
            raise FormatViolationError("Edge list has no `m directed|undirected` header line")

        node_count, directed = header
        self.__topology = Topology(node_count, edges, directed=directed)
        return self.__topology

    # Private methods

    @staticmethod
    def __parse_header(line_number, line):
        """Parse the header line `m directed|undirected`
        :type line_number: int
        :type line: str
        :rtype: tuple
        """
        header_regex = '^([1-9][0-9]*)[ \t]+(' + DIRECTED + '|' + UNDIRECTED + ')$'
        regex_match = regex.match(header_regex, line)
        if regex_match is None:
            error_message = ("Line <%d:%s> of document violates the edge-list format" % (line_number, line)
                             + "\nThe first line must read `m directed` or `m undirected`.")
            raise FormatViolationError(error_message)
        node_count, orientation = regex_match.groups()
        return int(node_count), orientation == DIRECTED

    @staticmethod
    def __parse_edge(line_number, line, node_count, strict=True):
        """Parse an edge line `i j`
        :type line_number: int
        :type line: str
        :type node_count: int
        :type strict: bool
        :rtype: tuple
        """
        # Node indices are non-negative ints, no leading zeros
        index_regex = '(0|[1-9][0-9]*)'
        edge_regex = '^' + index_regex + '[ \t]+' + index_regex + '$'
        regex_match = regex.match(edge_regex, line)

        error_message = None
        if regex_match is None:
            error_message = "Line <%d:%s> of document violates the edge-list format" % (line_number, line)
        else:
            i, j = (int(part) for part in regex_match.groups())
            if i >= node_count or j >= node_count:
                error_message = ("Line %d of document refers to a node outside 0..%d"
                                 % (line_number, node_count - 1))

        if error_message is not None:
            if strict:
                raise FormatViolationError(error_message)
            logger.warning("Skipping line: %s", error_message)
            return None

        return i, j


def dump_topology(topology):
    """Formats a topology as edge-list text that `Parser.parse()` reads back
    :type topology: Topology
    :rtype: str
    """
    lines = ["%d %s" % (topology.get_node_count(), DIRECTED if topology.is_directed() else UNDIRECTED)]
    for (i, j) in sorted(topology.get_edges()):
        if topology.is_directed() or i < j:
            lines.append("%d %d" % (i, j))
    return "\n".join(lines) + "\n"
