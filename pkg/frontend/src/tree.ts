// Concept DAG -> expandable tree. A concept with several parents appears
// once under each of them; expansion state is tracked per tree path so the
// copies expand independently.

import type { ConceptNode } from './api';

export interface TreeNode {
  name: string;
  kind: ConceptNode['kind'];
  path: string; // root>..>name, unique per displayed copy
  children: TreeNode[];
}

export function buildTree(concepts: ConceptNode[]): TreeNode[] {
  const childrenOf = new Map<string, string[]>();
  const byName = new Map<string, ConceptNode>();
  for (const c of concepts) {
    byName.set(c.name, c);
    if (!childrenOf.has(c.name)) childrenOf.set(c.name, []);
  }
  for (const c of concepts) {
    for (const p of c.parents) {
      childrenOf.get(p)?.push(c.name);
    }
  }
  for (const kids of childrenOf.values()) kids.sort();

  const make = (name: string, parentPath: string): TreeNode => {
    const path = parentPath ? `${parentPath}>${name}` : name;
    return {
      name,
      kind: byName.get(name)!.kind,
      path,
      children: (childrenOf.get(name) ?? []).map((k) => make(k, path)),
    };
  };

  const roots = concepts.filter((c) => c.parents.length === 0).map((c) => c.name);
  roots.sort();
  return roots.map((r) => make(r, ''));
}

export function renderTree(
  nodes: TreeNode[],
  expanded: Set<string>,
  onToggle: (path: string) => void,
  onSelect: (name: string) => void,
): HTMLUListElement {
  const ul = document.createElement('ul');
  ul.className = 'concept-tree';
  for (const node of nodes) {
    const li = document.createElement('li');
    const row = document.createElement('div');
    row.className = 'tree-row';

    const toggle = document.createElement('span');
    toggle.className = 'tree-toggle';
    if (node.children.length > 0) {
      toggle.textContent = expanded.has(node.path) ? '▾' : '▸';
      toggle.addEventListener('click', () => onToggle(node.path));
    } else {
      toggle.textContent = '·';
    }
    row.appendChild(toggle);

    const label = document.createElement('span');
    label.className = `tree-label kind-${node.kind}`;
    label.textContent = node.name;
    label.addEventListener('click', () => onSelect(node.name));
    row.appendChild(label);

    li.appendChild(row);
    if (node.children.length > 0 && expanded.has(node.path)) {
      li.appendChild(renderTree(node.children, expanded, onToggle, onSelect));
    }
    ul.appendChild(li);
  }
  return ul;
}
