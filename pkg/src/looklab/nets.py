"""Residual backbones shared by the keypoint, pose and embedding models.

Standard layout: 7x7 stem (stride 2) + max-pool (stride 2) + four residual
stages (strides 1, 2, 2, 2), total stride 32. ``base_width`` scales every
stage uniformly; width 64 is the standard network, smaller widths give the
desk-scale variants the test fixtures train in seconds.
"""

from __future__ import annotations

import torch
from torch import nn

RESNET_DEPTHS = (18, 34, 50)

# blocks per stage for each supported depth
_STAGE_BLOCKS = {18: (2, 2, 2, 2), 34: (3, 4, 6, 3), 50: (3, 4, 6, 3)}


def make_norm(kind: str, channels: int) -> nn.Module:
    """"batch" is the standard choice; "group" is batch-size independent so
    train and eval behave identically (metric-learning heads want that)."""
    if kind == "batch":
        return nn.BatchNorm2d(channels)
    if kind == "group":
        return nn.GroupNorm(min(8, channels), channels)
    raise ValueError(f"unknown norm kind {kind!r}")


class BasicBlock(nn.Module):
    expansion = 1

    def __init__(self, in_ch: int, out_ch: int, stride: int = 1, norm: str = "batch"):
        super().__init__()
        self.conv1 = nn.Conv2d(in_ch, out_ch, 3, stride=stride, padding=1, bias=False)
        self.bn1 = make_norm(norm, out_ch)
        self.conv2 = nn.Conv2d(out_ch, out_ch, 3, padding=1, bias=False)
        self.bn2 = make_norm(norm, out_ch)
        self.relu = nn.ReLU(inplace=True)
        self.down: nn.Module | None = None
        if stride != 1 or in_ch != out_ch:
            self.down = nn.Sequential(
                nn.Conv2d(in_ch, out_ch, 1, stride=stride, bias=False),
                make_norm(norm, out_ch),
            )

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        identity = x if self.down is None else self.down(x)
        out = self.relu(self.bn1(self.conv1(x)))
        out = self.bn2(self.conv2(out))
        return self.relu(out + identity)


class Bottleneck(nn.Module):
    expansion = 4

    def __init__(self, in_ch: int, out_ch: int, stride: int = 1, norm: str = "batch"):
        super().__init__()
        width = out_ch
        self.conv1 = nn.Conv2d(in_ch, width, 1, bias=False)
        self.bn1 = make_norm(norm, width)
        self.conv2 = nn.Conv2d(width, width, 3, stride=stride, padding=1, bias=False)
        self.bn2 = make_norm(norm, width)
        self.conv3 = nn.Conv2d(width, width * self.expansion, 1, bias=False)
        self.bn3 = make_norm(norm, width * self.expansion)
        self.relu = nn.ReLU(inplace=True)
        self.down: nn.Module | None = None
        if stride != 1 or in_ch != width * self.expansion:
            self.down = nn.Sequential(
                nn.Conv2d(in_ch, width * self.expansion, 1, stride=stride, bias=False),
                make_norm(norm, width * self.expansion),
            )

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        identity = x if self.down is None else self.down(x)
        out = self.relu(self.bn1(self.conv1(x)))
        out = self.relu(self.bn2(self.conv2(out)))
        out = self.bn3(self.conv3(out))
        return self.relu(out + identity)


class ResNetBackbone(nn.Module):
    """Feature extractor; ``forward`` maps (N,3,H,W) -> (N, out_channels, H/32, W/32)."""

    def __init__(self, depth: int = 18, base_width: int = 64, norm: str = "batch"):
        super().__init__()
        if depth not in _STAGE_BLOCKS:
            raise ValueError(f"unsupported backbone depth {depth}; pick one of {RESNET_DEPTHS}")
        block = Bottleneck if depth == 50 else BasicBlock
        widths = [base_width, base_width * 2, base_width * 4, base_width * 8]

        self.stem = nn.Sequential(
            nn.Conv2d(3, base_width, 7, stride=2, padding=3, bias=False),
            make_norm(norm, base_width),
            nn.ReLU(inplace=True),
            nn.MaxPool2d(3, stride=2, padding=1),
        )
        stages = []
        in_ch = base_width
        for width, blocks, stride in zip(widths, _STAGE_BLOCKS[depth], (1, 2, 2, 2)):
            layers = [block(in_ch, width, stride=stride, norm=norm)]
            in_ch = width * block.expansion
            for _ in range(blocks - 1):
                layers.append(block(in_ch, width, norm=norm))
            stages.append(nn.Sequential(*layers))
        self.stages = nn.Sequential(*stages)
        self.out_channels = in_ch
        self.stride = 32

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.stages(self.stem(x))


def deconv_head(in_channels: int, layers: int, filters: int, kernel: int, stride: int) -> nn.Sequential:
    """Stack of transposed convolutions with batch norm and ReLU.

    Each layer upsamples by ``stride``; padding is chosen so kernel 4 /
    stride 2 doubles the spatial size exactly.
    """
    if layers < 1:
        raise ValueError("deconv head needs at least one layer")
    padding = (kernel - stride) // 2
    output_padding = stride - kernel + 2 * padding
    if output_padding < 0:
        raise ValueError(f"incompatible deconv kernel {kernel} / stride {stride}")
    mods: list[nn.Module] = []
    ch = in_channels
    for _ in range(layers):
        mods.extend(
            [
                nn.ConvTranspose2d(ch, filters, kernel, stride=stride, padding=padding,
                                   output_padding=output_padding, bias=False),
                nn.BatchNorm2d(filters),
                nn.ReLU(inplace=True),
            ]
        )
        ch = filters
    return nn.Sequential(*mods)


def seed_torch(seed: int) -> None:
    """Seed torch RNGs for reproducible weight init and training order."""
    torch.manual_seed(seed)
